"""State and results of the graded prolongation."""

from __future__ import annotations
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

from models.superalgebra import (
    BasisElement,
    GradedLieSuperalgebra,
    GradedMap,
    JacobiReport,
    StructureTable,
    SuperDim,
    closure_defect,
    span_dims,
)
from utils.linalg import DimensionMismatchError, SparseVector


class ProlongationStatus(str, Enum):
    """Where a prolongation run stopped."""
    IN_PROGRESS = "in_progress"
    FINITE = "finite"
    THRESHOLD_EXCEEDED = "threshold_exceeded"


@dataclass(frozen=True)
class ReductionSpec:
    """Prescribed degree-0 part, given by its action on g_-1.

    ``basis_labels`` names the g_-1 coordinates (even first) the maps act on,
    so the reduction can be matched against a symbol algebra built elsewhere.
    """
    maps: Tuple[GradedMap, ...]
    basis_labels: Tuple[str, ...]
    name: str = "g0"

    def __post_init__(self):
        object.__setattr__(self, "maps", tuple(self.maps))
        object.__setattr__(self, "basis_labels", tuple(self.basis_labels))
        for item in self.maps:
            if item.source != item.target or item.source.total != len(self.basis_labels):
                raise DimensionMismatchError(
                    f"Reduction map {item.label} does not act on the {len(self.basis_labels)} labelled coordinates"
                )

    @property
    def dim(self) -> SuperDim:
        return span_dims(self.maps)

    def closure_defect(self) -> Optional[Tuple[int, int]]:
        return closure_defect(self.maps)


@dataclass
class ProlongationState:
    """Growing graded algebra m + g_0 + g_1 + ... with its structure table."""
    symbol: GradedLieSuperalgebra
    basis: List[BasisElement]
    table: StructureTable
    minus_one: List[int]
    levels: Dict[int, List[int]] = field(default_factory=dict)
    status: ProlongationStatus = ProlongationStatus.IN_PROGRESS
    # v -> [(coef, w, u)] with v = sum coef [w, u], w in g_-1
    presentations: Dict[int, List[Tuple[object, int, int]]] = field(default_factory=dict)
    # level element -> its restriction to g_-1, keyed by target * |g_-1| + position
    restrictions: Dict[int, SparseVector] = field(default_factory=dict)

    @classmethod
    def start(cls, symbol: GradedLieSuperalgebra, minus_one: Sequence[int]) -> ProlongationState:
        return cls(
            symbol=symbol,
            basis=list(symbol.basis),
            table=symbol.table.copy(),
            minus_one=list(minus_one),
        )

    @property
    def depth(self) -> int:
        return -min(b.degree for b in self.symbol.basis)

    def indices_of_degree(self, degree: int) -> List[int]:
        if degree >= 0:
            return list(self.levels.get(degree, []))
        return self.symbol.indices_of_degree(degree)

    def level_dims(self) -> Dict[int, SuperDim]:
        return {
            degree: SuperDim.count(self.basis[i].parity for i in indices)
            for degree, indices in sorted(self.levels.items())
        }

    def add_element(self, element: BasisElement) -> int:
        index = self.table.extend([element.parity])[0]
        self.basis.append(element.regraded(index, element.degree))
        return index

    def algebra(self) -> GradedLieSuperalgebra:
        """Snapshot of everything computed so far."""
        metadata = dict(self.symbol.metadata)
        metadata["route"] = "prolongation"
        return GradedLieSuperalgebra(basis=tuple(self.basis), table=self.table.copy(), metadata=metadata)


@dataclass
class ProlongationResult:
    """Outcome of a prolongation run."""
    algebra: GradedLieSuperalgebra
    status: ProlongationStatus
    level_dims: Dict[int, SuperDim]
    jacobi: Optional[JacobiReport] = None
    stop_reason: str = ""
    processing_time: float = 0.0

    @property
    def success(self) -> bool:
        return self.status is ProlongationStatus.FINITE and (self.jacobi is None or self.jacobi.success)

    @property
    def total_dim(self) -> SuperDim:
        return self.algebra.superdim

    def __repr__(self) -> str:
        return (
            f"ProlongationResult(status={self.status.value}, dim={self.total_dim}, "
            f"levels={ {k: str(v) for k, v in self.level_dims.items()} }, time={self.processing_time:.2f}s)"
        )

"""Super linear algebra vocabulary: parities, super dimensions, structure tables and graded maps."""

from __future__ import annotations
from dataclasses import dataclass, field, replace
from enum import IntEnum
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Any, Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from utils.linalg import (
    DimensionMismatchError,
    EchelonBasis,
    ExactMatrix,
    SparseVector,
    add_scaled,
    as_sparse,
    rank_of_vectors,
    scaled,
)


VectorLike = Union[Mapping[int, Any], Sequence[Any]]


class Parity(IntEnum):
    """Z/2 grading of a homogeneous element."""
    EVEN = 0
    ODD = 1

    def __add__(self, other: object) -> Parity:
        if isinstance(other, int):
            return Parity((int(self) + int(other)) % 2)
        return NotImplemented

    __radd__ = __add__

    def sign(self, other: Parity) -> int:
        """Koszul sign (-1)^(|self||other|)."""
        return -1 if (self and other) else 1

    def __str__(self) -> str:
        return str(int(self))


@dataclass(frozen=True, order=True)
class SuperDim:
    """Super dimension printed as (p|q)."""
    even: int = 0
    odd: int = 0

    def __post_init__(self):
        if self.even < 0 or self.odd < 0:
            raise ValueError(f"Negative super dimension ({self.even}|{self.odd})")

    @classmethod
    def parse(cls, text: str) -> SuperDim:
        body = text.strip().strip("()")
        even, odd = body.split("|")
        return cls(int(even), int(odd))

    @classmethod
    def count(cls, parities: Iterable[Parity]) -> SuperDim:
        even = odd = 0
        for parity in parities:
            if parity:
                odd += 1
            else:
                even += 1
        return cls(even, odd)

    @property
    def total(self) -> int:
        return self.even + self.odd

    def __add__(self, other: SuperDim) -> SuperDim:
        return SuperDim(self.even + other.even, self.odd + other.odd)

    def __sub__(self, other: SuperDim) -> SuperDim:
        return SuperDim(self.even - other.even, self.odd - other.odd)

    def __mul__(self, factor: int) -> SuperDim:
        return SuperDim(self.even * factor, self.odd * factor)

    __rmul__ = __mul__

    def fits_in(self, other: SuperDim) -> bool:
        return self.even <= other.even and self.odd <= other.odd

    def parity_at(self, position: int) -> Parity:
        """Parity of a coordinate in an even-first ordered basis of this shape."""
        if not 0 <= position < self.total:
            raise DimensionMismatchError(f"Position {position} outside {self}")
        return Parity.EVEN if position < self.even else Parity.ODD

    def __str__(self) -> str:
        return f"({self.even}|{self.odd})"

    def compact(self) -> str:
        return f"{self.even}|{self.odd}"


@dataclass(frozen=True)
class BasisElement:
    """Homogeneous basis vector of a graded superalgebra."""
    index: int
    parity: Parity
    degree: int
    label: str
    multidegree: Optional[Tuple[int, ...]] = None

    def regraded(self, index: int, degree: int) -> BasisElement:
        return replace(self, index=index, degree=degree)


class StructureTable:
    """Sparse bracket table over a homogeneous basis.

    Only pairs ``i < j`` and odd diagonals ``(i, i)`` are stored; the other
    ordering is recovered through super antisymmetry.
    """

    def __init__(self, parities: Sequence[Parity]):
        self.parities = tuple(Parity(p) for p in parities)
        self._entries: Dict[Tuple[int, int], SparseVector] = {}

    @property
    def size(self) -> int:
        return len(self.parities)

    def _check(self, i: int, j: int):
        if not (0 <= i < self.size and 0 <= j < self.size):
            raise DimensionMismatchError(f"Basis pair ({i}, {j}) outside table of size {self.size}")

    def swap_sign(self, i: int, j: int) -> int:
        return -self.parities[i].sign(self.parities[j])

    def set_bracket(self, i: int, j: int, vector: VectorLike):
        """Record [b_i, b_j]; the mirrored entry is implied."""
        self._check(i, j)
        value = as_sparse(vector)
        if i == j and not self.parities[i] and value:
            raise ValueError(f"Even basis element {i} cannot have a nonzero self-bracket")
        if i > j:
            i, j = j, i
            value = scaled(value, Fraction(self.swap_sign(j, i)))
        if value:
            self._entries[(i, j)] = value
        else:
            self._entries.pop((i, j), None)

    def get(self, i: int, j: int) -> SparseVector:
        self._check(i, j)
        if i <= j:
            return dict(self._entries.get((i, j), {}))
        stored = self._entries.get((j, i))
        if not stored:
            return {}
        return scaled(stored, Fraction(self.swap_sign(i, j)))

    def raw(self, i: int, j: int) -> Mapping[int, Fraction]:
        """Stored entry without copying; only for ``i <= j``."""
        return self._entries.get((i, j), {})

    def entries(self) -> Iterator[Tuple[Tuple[int, int], SparseVector]]:
        for key in sorted(self._entries):
            yield key, dict(self._entries[key])

    def __len__(self) -> int:
        return len(self._entries)

    def extend(self, parities: Iterable[Parity]) -> List[int]:
        """Append basis slots and return their indices; existing entries are kept."""
        start = self.size
        self.parities = self.parities + tuple(Parity(p) for p in parities)
        return list(range(start, self.size))

    def copy(self) -> StructureTable:
        clone = StructureTable(self.parities)
        clone._entries = {key: dict(value) for key, value in self._entries.items()}
        return clone

    def restricted(self, keep: Sequence[int]) -> StructureTable:
        """Table on the sub-basis ``keep`` (old indices), re-indexed in the given order.

        Brackets landing outside the kept indices are dropped, which is exactly
        the quotient by the complement when that complement is an ideal.
        """
        position = {old: new for new, old in enumerate(keep)}
        table = StructureTable([self.parities[old] for old in keep])
        for (i, j), value in self._entries.items():
            if i in position and j in position:
                image = {position[k]: c for k, c in value.items() if k in position}
                table.set_bracket(position[i], position[j], image)
        return table


@dataclass
class JacobiReport:
    """Outcome of the super Jacobi check."""
    success: bool
    triples_checked: int = 0
    witness: Optional[Tuple[int, int, int]] = None
    residual: Optional[SparseVector] = None
    error_message: str = ""

    def __repr__(self) -> str:
        return (
            f"JacobiReport(success={self.success}, "
            f"triples_checked={self.triples_checked}, witness={self.witness})"
        )


@dataclass
class GradedLieSuperalgebra:
    """Finite dimensional graded Lie superalgebra given by a structure table."""
    basis: Tuple[BasisElement, ...]
    table: StructureTable
    metadata: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        self.basis = tuple(self.basis)
        if len(self.basis) != self.table.size:
            raise DimensionMismatchError(
                f"Basis has {len(self.basis)} elements, table has {self.table.size}"
            )
        for position, element in enumerate(self.basis):
            if element.index != position:
                raise DimensionMismatchError(f"Basis element {element.label} has index {element.index} at {position}")
            if element.parity != self.table.parities[position]:
                raise DimensionMismatchError(f"Parity of {element.label} disagrees with the table")

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def superdim(self) -> SuperDim:
        return SuperDim.count(b.parity for b in self.basis)

    def labels(self) -> List[str]:
        return [b.label for b in self.basis]

    def index_of(self, label: str) -> int:
        for element in self.basis:
            if element.label == label:
                return element.index
        raise KeyError(label)

    def _vector(self, x: VectorLike) -> SparseVector:
        if not isinstance(x, Mapping) and len(x) != self.dim:
            raise DimensionMismatchError(f"Vector of length {len(x)} for algebra of dim {self.dim}")
        vector = as_sparse(x)
        if vector and (min(vector) < 0 or max(vector) >= self.dim):
            raise DimensionMismatchError(f"Vector index outside algebra of dim {self.dim}")
        return vector

    def bracket_basis(self, i: int, j: int) -> SparseVector:
        return self.table.get(i, j)

    def bracket(self, x: VectorLike, y: VectorLike) -> SparseVector:
        """Bilinear extension of the structure table."""
        x = self._vector(x)
        y = self._vector(y)
        result: SparseVector = {}
        for i, a in x.items():
            for j, b in y.items():
                value = self.table.get(i, j)
                if value:
                    add_scaled(result, value, a * b)
        return result

    def parity_of(self, vector: Mapping[int, Fraction]) -> Optional[Parity]:
        """Parity of a homogeneous vector, None for zero or mixed vectors."""
        parities = {self.basis[i].parity for i in vector}
        if len(parities) == 1:
            return parities.pop()
        return None

    def degrees(self) -> List[int]:
        return sorted({b.degree for b in self.basis})

    def indices_of_degree(self, degree: int, parity: Optional[Parity] = None) -> List[int]:
        return [
            b.index for b in self.basis
            if b.degree == degree and (parity is None or b.parity == parity)
        ]

    def graded_dims(self) -> Dict[int, SuperDim]:
        """Super dimension of every nonzero graded piece."""
        result: Dict[int, SuperDim] = {}
        for degree in self.degrees():
            result[degree] = SuperDim.count(self.basis[i].parity for i in self.indices_of_degree(degree))
        return result

    def check_grading(self) -> Optional[Tuple[int, int]]:
        """First basis pair whose bracket breaks degree or parity additivity."""
        for (i, j), value in self.table.entries():
            degree = self.basis[i].degree + self.basis[j].degree
            parity = self.basis[i].parity + self.basis[j].parity
            for k in value:
                if self.basis[k].degree != degree or self.basis[k].parity != parity:
                    return i, j
        return None

    def _ad_rows(self) -> List[Dict[int, SparseVector]]:
        rows: List[Dict[int, SparseVector]] = [dict() for _ in range(self.dim)]
        for (i, j), value in self.table.entries():
            rows[i][j] = value
            if i != j:
                rows[j][i] = scaled(value, Fraction(self.table.swap_sign(i, j)))
        return rows

    def check_jacobi(self) -> JacobiReport:
        """Graded cyclic Jacobi identity on every basis triple i <= j <= l."""
        ad = self._ad_rows()
        parity = [b.parity for b in self.basis]

        def act(i: int, vector: Mapping[int, Fraction]) -> SparseVector:
            out: SparseVector = {}
            row = ad[i]
            for k, c in vector.items():
                value = row.get(k)
                if value:
                    add_scaled(out, value, c)
            return out

        checked = 0
        for i, j, l in combinations_with_replacement(range(self.dim), 3):
            checked += 1
            residual: SparseVector = {}
            add_scaled(residual, act(i, ad[j].get(l, {})), Fraction(parity[i].sign(parity[l])))
            add_scaled(residual, act(j, ad[l].get(i, {})), Fraction(parity[j].sign(parity[i])))
            add_scaled(residual, act(l, ad[i].get(j, {})), Fraction(parity[l].sign(parity[j])))
            if residual:
                return JacobiReport(
                    success=False,
                    triples_checked=checked,
                    witness=(i, j, l),
                    residual=residual,
                    error_message=(
                        f"Jacobi fails on ({self.basis[i].label}, "
                        f"{self.basis[j].label}, {self.basis[l].label})"
                    ),
                )
        return JacobiReport(success=True, triples_checked=checked)

    def bracket_rank(self, first: int, second: int) -> int:
        """Rank of the bracket map g_first x g_second -> g_(first+second)."""
        left = self.indices_of_degree(first)
        right = self.indices_of_degree(second)
        if first == second:
            pairs = [(a, b) for n, a in enumerate(left) for b in left[n:]]
        else:
            pairs = [(a, b) for a in left for b in right]
        return rank_of_vectors(self.table.get(a, b) for a, b in pairs)

    def derived_dims(self) -> SuperDim:
        """Super dimension of [g, g]."""
        basis = EchelonBasis()
        for _, value in self.table.entries():
            basis.add(value)
        return SuperDim.count(self.basis[c].parity for c in basis.pivot_columns)

    def canonical_order(self) -> List[int]:
        return sorted(range(self.dim), key=lambda i: (-self.basis[i].degree, int(self.basis[i].parity), self.basis[i].label))

    def to_dict(self) -> Dict[str, Any]:
        """JSON-ready export ordered by (degree descending, even first, label)."""
        order = self.canonical_order()
        position = {old: new for new, old in enumerate(order)}
        reordered = StructureTable([self.basis[old].parity for old in order])
        for (i, j), value in self.table.entries():
            reordered.set_bracket(position[i], position[j], {position[k]: c for k, c in value.items()})
        basis = []
        for old in order:
            element = self.basis[old]
            basis.append({
                "label": element.label,
                "parity": int(element.parity),
                "degree": element.degree,
                "multidegree": list(element.multidegree) if element.multidegree is not None else None,
            })
        brackets = [
            [i, j, [[k, c.numerator, c.denominator] for k, c in sorted(value.items())]]
            for (i, j), value in reordered.entries()
        ]
        metadata = {key: value for key, value in self.metadata.items() if isinstance(value, (str, int, list, bool))}
        return {"basis": basis, "brackets": brackets, "metadata": metadata}

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> GradedLieSuperalgebra:
        basis = tuple(
            BasisElement(
                index=n,
                parity=Parity(item["parity"]),
                degree=int(item["degree"]),
                label=item["label"],
                multidegree=tuple(item["multidegree"]) if item.get("multidegree") is not None else None,
            )
            for n, item in enumerate(data["basis"])
        )
        table = StructureTable([b.parity for b in basis])
        for i, j, terms in data["brackets"]:
            table.set_bracket(i, j, {k: Fraction(num, den) for k, num, den in terms})
        return cls(basis=basis, table=table, metadata=dict(data.get("metadata", {})))

    def __repr__(self) -> str:
        return f"GradedLieSuperalgebra(dim={self.superdim}, brackets={len(self.table)})"


@dataclass(frozen=True)
class GradedMap:
    """Linear map between two super vector spaces with even-first bases."""
    source: SuperDim
    target: SuperDim
    matrix: ExactMatrix
    label: str = ""

    def __post_init__(self):
        if self.matrix.shape != (self.target.total, self.source.total):
            raise DimensionMismatchError(
                f"Matrix shape {self.matrix.shape} does not match {self.target} <- {self.source}"
            )

    @classmethod
    def zero(cls, source: SuperDim, target: SuperDim) -> GradedMap:
        return cls(source, target, ExactMatrix.zeros(target.total, source.total))

    @classmethod
    def from_images(cls, source: SuperDim, target: SuperDim, images: Sequence[Mapping[int, Any]], label: str = "") -> GradedMap:
        """Build from the images of the source basis vectors."""
        return cls(source, target, ExactMatrix.from_columns(images, target.total), label)

    def _same_block(self, row: int, col: int) -> bool:
        return self.target.parity_at(row) == self.source.parity_at(col)

    def parity_split(self) -> Tuple[GradedMap, GradedMap]:
        """Even part keeps the diagonal parity blocks, odd part the off-diagonal ones."""
        even = self.matrix.masked(self._same_block)
        odd = self.matrix.masked(lambda i, j: not self._same_block(i, j))
        return (
            GradedMap(self.source, self.target, even, self.label),
            GradedMap(self.source, self.target, odd, self.label),
        )

    @property
    def parity(self) -> Optional[Parity]:
        """Parity of a homogeneous nonzero map; None when zero or mixed."""
        even, odd = self.parity_split()
        if even.matrix.is_zero() == odd.matrix.is_zero():
            return None
        return Parity.ODD if even.matrix.is_zero() else Parity.EVEN

    def image(self, column: int) -> SparseVector:
        return self.matrix.column(column)

    def __add__(self, other: GradedMap) -> GradedMap:
        return GradedMap(self.source, self.target, self.matrix + other.matrix, self.label)

    def __sub__(self, other: GradedMap) -> GradedMap:
        return GradedMap(self.source, self.target, self.matrix - other.matrix, self.label)

    def scale(self, coef: Any) -> GradedMap:
        return GradedMap(self.source, self.target, self.matrix.scale(coef), self.label)

    def compose(self, other: GradedMap) -> GradedMap:
        """``self`` after ``other``."""
        if other.target != self.source:
            raise DimensionMismatchError(f"Cannot compose {self.source} with target {other.target}")
        return GradedMap(other.source, self.target, self.matrix @ other.matrix)

    def supercommutator(self, other: GradedMap) -> GradedMap:
        """[A, B] = AB - (-1)^(|A||B|) BA, extended bilinearly over parity parts."""
        if not (self.source == self.target == other.source == other.target):
            raise DimensionMismatchError("Supercommutator needs endomorphisms of one space")
        result = GradedMap.zero(self.source, self.target)
        for a, pa in zip(self.parity_split(), (Parity.EVEN, Parity.ODD)):
            for b, pb in zip(other.parity_split(), (Parity.EVEN, Parity.ODD)):
                if a.matrix.is_zero() or b.matrix.is_zero():
                    continue
                term = a.compose(b).matrix.combine(b.compose(a).matrix, Fraction(-pa.sign(pb)))
                result = GradedMap(self.source, self.target, result.matrix + term)
        return result

    def flatten(self) -> SparseVector:
        """Entries as one sparse vector indexed by row * cols + col."""
        cols = self.matrix.cols
        return {i * cols + j: value for (i, j), value in self.matrix.items()}

    def __repr__(self) -> str:
        return f"GradedMap({self.label or 'map'}: {self.source} -> {self.target}, parity={self.parity})"


def span_dims(maps: Sequence[GradedMap]) -> SuperDim:
    """Super dimension of the span of homogeneous maps (parity parts counted separately)."""
    even_basis = EchelonBasis()
    odd_basis = EchelonBasis()
    for item in maps:
        even, odd = item.parity_split()
        even_basis.add(even.flatten())
        odd_basis.add(odd.flatten())
    return SuperDim(len(even_basis), len(odd_basis))


def derived_span_dims(maps: Sequence[GradedMap]) -> SuperDim:
    """Super dimension of the span of all pairwise supercommutators."""
    return span_dims([a.supercommutator(b) for n, a in enumerate(maps) for b in maps[n:]])


def closure_defect(maps: Sequence[GradedMap]) -> Optional[Tuple[int, int]]:
    """First pair whose supercommutator leaves the span of ``maps``."""
    basis = EchelonBasis()
    for item in maps:
        basis.add(item.flatten())
    for n, a in enumerate(maps):
        for m in range(n, len(maps)):
            if not basis.contains(a.supercommutator(maps[m]).flatten()):
                return n, m
    return None

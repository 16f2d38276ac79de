"""Result objects returned by checks and the per-case request/report models."""

from __future__ import annotations
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, validator

from models.roots import DiagramId, InvalidDiagramError, ParabolicId, SuperAlgebraName
from models.superalgebra import GradedLieSuperalgebra, JacobiReport, SuperDim
from utils.linalg import SparseVector


class CaseRequestError(Exception):
    """Raised for a case request that does not name a valid parabolic."""
    pass


@dataclass
class CrossCheckReport:
    """Agreement of two constructions of the same symbol algebra."""
    success: bool
    degree_pair: Optional[Tuple[int, int]] = None
    pairs_checked: int = 0
    error_message: str = ""

    def __repr__(self) -> str:
        return f"CrossCheckReport(success={self.success}, pairs_checked={self.pairs_checked}, degree_pair={self.degree_pair})"


@dataclass
class NullSpanReport:
    """Span of the null vectors of the bracket on g_-1."""
    parabolic: ParabolicId
    minus_one: SuperDim
    span: SuperDim
    witnesses: List[str] = field(default_factory=list)

    @property
    def full(self) -> bool:
        return self.span == self.minus_one

    def __repr__(self) -> str:
        return f"NullSpanReport({self.parabolic}: {self.span} in {self.minus_one}, full={self.full})"


@dataclass
class IntegralSearchResult:
    """Outcome of the search for a graded-abelian subspace of g_-1."""
    parabolic: ParabolicId
    target: SuperDim
    witness: Optional[List[SparseVector]] = None
    labels: List[str] = field(default_factory=list)

    @property
    def success(self) -> bool:
        return self.witness is not None

    def __repr__(self) -> str:
        found = "found" if self.success else "none-found"
        return f"IntegralSearchResult({self.parabolic}, target={self.target}, {found}, labels={self.labels})"


@dataclass
class EquivalenceReport:
    """Comparison of symbol algebras that are identified by odd reflections."""
    success: bool
    chains_checked: int = 0
    mismatches: List[str] = field(default_factory=list)

    @property
    def error_message(self) -> str:
        return "; ".join(self.mismatches)


@dataclass
class ClosureReport:
    """Result of closing a finite list of fields or functions under a bracket."""
    success: bool
    algebra: Optional[GradedLieSuperalgebra] = None
    offending_pair: Optional[Tuple[int, int]] = None
    residual: Optional[object] = None
    jacobi: Optional[JacobiReport] = None
    error_message: str = ""

    @property
    def dims(self) -> Optional[SuperDim]:
        return self.algebra.superdim if self.algebra is not None else None

    def __repr__(self) -> str:
        return f"ClosureReport(success={self.success}, dims={self.dims}, offending_pair={self.offending_pair})"


class ReductionMode(str, Enum):
    """Whether the degree-0 part is reduced for dark cases."""
    AUTO = "auto"
    NONE = "none"


class CaseRequest(BaseModel):
    """One parabolic case to run."""
    algebra: str
    diagram: str
    crossing: List[int]
    reduce: ReductionMode = ReductionMode.AUTO
    threshold: Optional[int] = None

    @validator('algebra')
    def validate_algebra(cls, v):
        try:
            return SuperAlgebraName.parse(v).value
        except InvalidDiagramError as e:
            raise ValueError(str(e))

    @validator('diagram')
    def validate_diagram(cls, v, values):
        diagram = v.strip().upper()
        if 'algebra' in values:
            try:
                DiagramId.parse(values['algebra'], diagram)
            except InvalidDiagramError as e:
                raise ValueError(str(e))
        return diagram

    @validator('crossing')
    def validate_crossing(cls, v):
        if not v:
            raise ValueError('Crossing set must be nonempty')
        return sorted(set(v))

    @validator('threshold')
    def validate_threshold(cls, v):
        if v is not None and v < 1:
            raise ValueError('Threshold must be positive')
        return v

    @property
    def parabolic(self) -> ParabolicId:
        try:
            return ParabolicId.of(self.algebra, self.diagram, self.crossing)
        except InvalidDiagramError as e:
            raise CaseRequestError(str(e))

    @property
    def case_id(self) -> str:
        return str(self.parabolic)


class CaseReport(BaseModel):
    """Everything a case run established."""
    case: str
    reduction: str = "none"
    status: str
    level_dims: Dict[int, str] = {}
    total_dim: str = ""
    growth_vector: List[str] = []
    depth: int = 0
    jacobi_ok: Optional[bool] = None
    oracle_match: Optional[bool] = None
    symbol_match: Optional[bool] = None
    null_span: Optional[str] = None
    null_span_full: Optional[bool] = None
    passed: bool = False
    error_message: str = ""

    @validator('oracle_match', always=True)
    def validate_oracle_match(cls, v, values):
        if values.get('status') == "finite" and v is None:
            raise ValueError('Finite cases carry an oracle verdict')
        return v


@dataclass
class FieldCheckReport:
    """Verdicts on one realisation by vector fields or generating functions."""
    name: str
    closure: Optional[ClosureReport] = None
    origin_span: Optional[SuperDim] = None
    checks: Dict[str, bool] = field(default_factory=dict)
    messages: List[str] = field(default_factory=list)

    @property
    def success(self) -> bool:
        return self.closure is not None and self.closure.success and all(self.checks.values())

    @property
    def error_message(self) -> str:
        failed = [name for name, ok in self.checks.items() if not ok]
        return "; ".join(self.messages + [f"{name} failed" for name in failed])

    def __repr__(self) -> str:
        dims = self.closure.dims if self.closure is not None else None
        return f"FieldCheckReport({self.name}, success={self.success}, dims={dims}, checks={self.checks})"

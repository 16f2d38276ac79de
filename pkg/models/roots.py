"""Identifiers and weights for the root data of G(3) and F(4)."""

from __future__ import annotations
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable, Optional, Tuple

from models.superalgebra import Parity, SuperDim


ROMAN = ("I", "II", "III", "IV", "V", "VI")


class InvalidDiagramError(Exception):
    """Raised for an algebra/diagram/crossing combination that does not exist."""
    pass


class MixedAlgebraError(Exception):
    """Raised when weights of G(3) and F(4) are combined."""
    pass


class SuperAlgebraName(str, Enum):
    """The exceptional simple Lie superalgebras handled by the engine."""
    G3 = "G3"
    F4 = "F4"

    @classmethod
    def parse(cls, value: str) -> SuperAlgebraName:
        normalized = value.strip().upper().replace("(", "").replace(")", "")
        try:
            return cls(normalized)
        except ValueError:
            raise InvalidDiagramError(f"Unknown algebra: {value}")

    @property
    def rank(self) -> int:
        return 3 if self is SuperAlgebraName.G3 else 4

    @property
    def diagrams(self) -> Tuple[str, ...]:
        return ROMAN[:4] if self is SuperAlgebraName.G3 else ROMAN

    @property
    def total_dim(self) -> SuperDim:
        return SuperDim(17, 14) if self is SuperAlgebraName.G3 else SuperDim(24, 16)

    @property
    def display(self) -> str:
        return "G(3)" if self is SuperAlgebraName.G3 else "F(4)"


@dataclass(frozen=True)
class DiagramId:
    """A Dynkin diagram (choice of simple system) of one algebra."""
    algebra: SuperAlgebraName
    xi: str

    def __post_init__(self):
        object.__setattr__(self, "algebra", SuperAlgebraName(self.algebra))
        if self.xi not in self.algebra.diagrams:
            raise InvalidDiagramError(f"{self.algebra.value} has no diagram {self.xi}")

    @classmethod
    def parse(cls, algebra: str, xi: str) -> DiagramId:
        return cls(SuperAlgebraName.parse(algebra), xi.strip().upper())

    @property
    def rank(self) -> int:
        return self.algebra.rank

    @property
    def position(self) -> int:
        return ROMAN.index(self.xi)

    def __str__(self) -> str:
        return f"{self.algebra.value} {self.xi}"


@dataclass(frozen=True)
class ParabolicId:
    """Parabolic subalgebra given by a diagram and a set of crossed nodes (1-based)."""
    diagram: DiagramId
    crossing: Tuple[int, ...]

    def __post_init__(self):
        nodes = tuple(sorted(set(int(k) for k in self.crossing)))
        if not nodes:
            raise InvalidDiagramError("Crossing set must be nonempty")
        if nodes[0] < 1 or nodes[-1] > self.diagram.rank:
            raise InvalidDiagramError(f"Crossing {nodes} outside nodes 1..{self.diagram.rank}")
        object.__setattr__(self, "crossing", nodes)

    @classmethod
    def of(cls, algebra: str, xi: str, crossing: Iterable[int]) -> ParabolicId:
        return cls(DiagramId.parse(algebra, xi), tuple(crossing))

    @classmethod
    def parse(cls, algebra: str, xi: str, crossing: str) -> ParabolicId:
        """Crossing written as ``"1,3"`` or ``"13"``."""
        text = crossing.replace(",", "").replace(" ", "")
        if not text.isdigit():
            raise InvalidDiagramError(f"Cannot read crossing set {crossing!r}")
        return cls.of(algebra, xi, (int(ch) for ch in text))

    @property
    def algebra(self) -> SuperAlgebraName:
        return self.diagram.algebra

    @property
    def label(self) -> str:
        return f"{self.diagram.xi}_{''.join(str(k) for k in self.crossing)}"

    def sort_key(self) -> Tuple[int, int, Tuple[int, ...]]:
        return self.diagram.position, len(self.crossing), self.crossing

    def __str__(self) -> str:
        return f"{self.algebra.value} {self.label}"


def _canonical_coeffs(algebra: SuperAlgebraName, coeffs: Iterable) -> Tuple[Fraction, ...]:
    values = tuple(Fraction(c) for c in coeffs)
    if len(values) != 4:
        raise ValueError("Ambient weights have four coefficients (delta, e1, e2, e3)")
    if algebra is SuperAlgebraName.G3:
        delta, e1, e2, e3 = values
        # e3 = -e1 - e2
        return delta, e1 - e3, e2 - e3, Fraction(0)
    return values


@dataclass(frozen=True)
class AmbientWeight:
    """Weight written in the (delta, e1, e2, e3) coordinates."""
    algebra: SuperAlgebraName
    coeffs: Tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "algebra", SuperAlgebraName(self.algebra))
        object.__setattr__(self, "coeffs", _canonical_coeffs(self.algebra, self.coeffs))

    @classmethod
    def zero(cls, algebra: SuperAlgebraName) -> AmbientWeight:
        return cls(algebra, (0, 0, 0, 0))

    def _same(self, other: AmbientWeight):
        if self.algebra is not other.algebra:
            raise MixedAlgebraError(f"Cannot combine {self.algebra.value} and {other.algebra.value} weights")

    def __add__(self, other: AmbientWeight) -> AmbientWeight:
        self._same(other)
        return AmbientWeight(self.algebra, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: AmbientWeight) -> AmbientWeight:
        return self + (-other)

    def __neg__(self) -> AmbientWeight:
        return AmbientWeight(self.algebra, tuple(-a for a in self.coeffs))

    def __mul__(self, factor) -> AmbientWeight:
        return AmbientWeight(self.algebra, tuple(a * factor for a in self.coeffs))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __str__(self) -> str:
        names = ("d", "e1", "e2", "e3")
        parts = []
        for name, value in zip(names, self.coeffs):
            if not value:
                continue
            sign = "-" if value < 0 else "+"
            magnitude = abs(value)
            body = name if magnitude == 1 else f"{magnitude}{name}"
            parts.append(f"{sign}{body}")
        if not parts:
            return "0"
        text = "".join(parts)
        return text[1:] if text.startswith("+") else text


@dataclass(frozen=True)
class RootVector:
    """A root expressed over the simple roots of one diagram."""
    diagram: DiagramId
    coeffs: Tuple[int, ...]
    parity: Parity
    ambient: AmbientWeight = field(compare=False)

    @property
    def height(self) -> int:
        return sum(self.coeffs)

    @property
    def is_positive(self) -> bool:
        return self.height > 0

    def negated(self) -> RootVector:
        return RootVector(self.diagram, tuple(-c for c in self.coeffs), self.parity, -self.ambient)

    @property
    def label(self) -> str:
        """Compact label such as ``-a1-2a2`` or ``a3``."""
        parts = []
        for k, c in enumerate(self.coeffs, start=1):
            if not c:
                continue
            sign = "-" if c < 0 else "+"
            body = f"a{k}" if abs(c) == 1 else f"{abs(c)}a{k}"
            parts.append(f"{sign}{body}")
        text = "".join(parts)
        return text[1:] if text.startswith("+") else text

    def __str__(self) -> str:
        return self.label


@dataclass(frozen=True)
class DarkCase:
    """Parabolics with infinite unreduced prolongation and their reduction data."""
    members: Tuple[ParabolicId, ...]
    prolongation: str
    der0_name: str
    der0_dim: SuperDim
    reduction_name: str
    reduction_dim: SuperDim

    def contains(self, parabolic: ParabolicId) -> bool:
        return parabolic in self.members

    @property
    def representative(self) -> ParabolicId:
        return self.members[0]

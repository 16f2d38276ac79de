"""Polynomials in commuting and anticommuting coordinates, and vector fields over them.

A monomial is ``(exponents over the even coordinates, sorted tuple of odd
coordinate positions)``; the sign of reordering odd factors is absorbed into
the coefficient, so equal polynomials have equal term dictionaries.
"""

from __future__ import annotations
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Iterable, Mapping, Optional, Tuple

from models.superalgebra import Parity
from utils.linalg import SparseVector, to_scalar


Monomial = Tuple[Tuple[int, ...], Tuple[int, ...]]


class CoordinateMismatchError(Exception):
    """Raised when objects over different coordinate systems are combined."""
    pass


@dataclass(frozen=True)
class CoordinateSystem:
    """Named even coordinates followed by named odd coordinates."""
    even: Tuple[str, ...]
    odd: Tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "even", tuple(self.even))
        object.__setattr__(self, "odd", tuple(self.odd))
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"Repeated coordinate names in {self.names}")

    @property
    def names(self) -> Tuple[str, ...]:
        return self.even + self.odd

    def parity(self, name: str) -> Parity:
        if name in self.even:
            return Parity.EVEN
        if name in self.odd:
            return Parity.ODD
        raise CoordinateMismatchError(f"Unknown coordinate {name}")

    def position(self, name: str) -> int:
        """Index in ``even`` or in ``odd`` according to the parity."""
        return self.even.index(name) if name in self.even else self.odd.index(name)

    def index(self, name: str) -> int:
        """Index in the even-first list of all coordinates."""
        return self.names.index(name)

    def unit(self) -> Monomial:
        return (0,) * len(self.even), ()


def _merge_odd(first: Tuple[int, ...], second: Tuple[int, ...]) -> Optional[Tuple[Tuple[int, ...], int]]:
    """Sorted product of two sorted odd monomials with its sign, None if they share a factor."""
    if set(first) & set(second):
        return None
    swaps = sum(1 for y in second for x in first if x > y)
    return tuple(sorted(first + second)), (-1 if swaps % 2 else 1)


class SuperPolynomial:
    """Polynomial over a CoordinateSystem with exact rational coefficients."""

    __slots__ = ("system", "terms")

    def __init__(self, system: CoordinateSystem, terms: Optional[Mapping[Monomial, Any]] = None):
        self.system = system
        self.terms: Dict[Monomial, Fraction] = {}
        for monomial, coef in (terms or {}).items():
            coef = to_scalar(coef)
            if coef:
                self.terms[monomial] = coef

    @classmethod
    def zero(cls, system: CoordinateSystem) -> SuperPolynomial:
        return cls(system)

    @classmethod
    def constant(cls, system: CoordinateSystem, value: Any) -> SuperPolynomial:
        return cls(system, {system.unit(): value})

    @classmethod
    def variable(cls, system: CoordinateSystem, name: str) -> SuperPolynomial:
        exps, odd = system.unit()
        if system.parity(name):
            return cls(system, {(exps, (system.position(name),)): 1})
        exps = tuple(1 if k == system.position(name) else 0 for k in range(len(exps)))
        return cls(system, {(exps, odd): 1})

    def _same(self, other: SuperPolynomial):
        if self.system != other.system:
            raise CoordinateMismatchError("Polynomials live on different coordinate systems")

    def _lift(self, other: Any) -> SuperPolynomial:
        if isinstance(other, SuperPolynomial):
            self._same(other)
            return other
        return SuperPolynomial.constant(self.system, other)

    def __add__(self, other: Any) -> SuperPolynomial:
        other = self._lift(other)
        terms = dict(self.terms)
        for monomial, coef in other.terms.items():
            terms[monomial] = terms.get(monomial, 0) + coef
        return SuperPolynomial(self.system, terms)

    __radd__ = __add__

    def __neg__(self) -> SuperPolynomial:
        return SuperPolynomial(self.system, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: Any) -> SuperPolynomial:
        return self + (-self._lift(other))

    def __rsub__(self, other: Any) -> SuperPolynomial:
        return self._lift(other) - self

    def scale(self, coef: Any) -> SuperPolynomial:
        coef = to_scalar(coef)
        return SuperPolynomial(self.system, {m: c * coef for m, c in self.terms.items()})

    def __mul__(self, other: Any) -> SuperPolynomial:
        if not isinstance(other, SuperPolynomial):
            return self.scale(other)
        self._same(other)
        terms: Dict[Monomial, Fraction] = {}
        for (exps_a, odd_a), coef_a in self.terms.items():
            for (exps_b, odd_b), coef_b in other.terms.items():
                merged = _merge_odd(odd_a, odd_b)
                if merged is None:
                    continue
                odd, sign = merged
                key = (tuple(a + b for a, b in zip(exps_a, exps_b)), odd)
                terms[key] = terms.get(key, 0) + sign * coef_a * coef_b
        return SuperPolynomial(self.system, terms)

    def __rmul__(self, other: Any) -> SuperPolynomial:
        return self.scale(other)

    def __pow__(self, exponent: int) -> SuperPolynomial:
        result = SuperPolynomial.constant(self.system, 1)
        for _ in range(exponent):
            result = result * self
        return result

    def derivative(self, name: str) -> SuperPolynomial:
        """Left derivative with respect to a coordinate."""
        position = self.system.position(name)
        terms: Dict[Monomial, Fraction] = {}
        if self.system.parity(name):
            for (exps, odd), coef in self.terms.items():
                if position in odd:
                    p = odd.index(position)
                    key = (exps, odd[:p] + odd[p + 1:])
                    terms[key] = terms.get(key, 0) + (-coef if p % 2 else coef)
        else:
            for (exps, odd), coef in self.terms.items():
                if exps[position]:
                    lowered = tuple(e - 1 if k == position else e for k, e in enumerate(exps))
                    terms[(lowered, odd)] = terms.get((lowered, odd), 0) + coef * exps[position]
        return SuperPolynomial(self.system, terms)

    def parity_parts(self) -> Tuple[SuperPolynomial, SuperPolynomial]:
        even = {m: c for m, c in self.terms.items() if len(m[1]) % 2 == 0}
        odd = {m: c for m, c in self.terms.items() if len(m[1]) % 2 == 1}
        return SuperPolynomial(self.system, even), SuperPolynomial(self.system, odd)

    @property
    def parity(self) -> Optional[Parity]:
        """Parity of a homogeneous nonzero polynomial, None otherwise."""
        parities = {len(odd) % 2 for _, odd in self.terms}
        return Parity(parities.pop()) if len(parities) == 1 else None

    def weight(self, weights: Mapping[str, int]) -> Optional[int]:
        """Common weighted degree of all terms, None when the terms disagree."""
        values = set()
        for exps, odd in self.terms:
            total = sum(e * weights.get(name, 0) for e, name in zip(exps, self.system.even))
            total += sum(weights.get(self.system.odd[k], 0) for k in odd)
            values.add(total)
        return values.pop() if len(values) == 1 else None

    @property
    def constant_term(self) -> Fraction:
        return self.terms.get(self.system.unit(), Fraction(0))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, SuperPolynomial):
            return self.system == other.system and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == SuperPolynomial.constant(self.system, other)
        return NotImplemented

    __hash__ = None

    def _monomial_text(self, monomial: Monomial) -> str:
        exps, odd = monomial
        factors = []
        for e, name in zip(exps, self.system.even):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        factors.extend(self.system.odd[k] for k in odd)
        return " ".join(factors)

    def sorted_terms(self) -> Iterable[Tuple[Monomial, Fraction]]:
        return sorted(self.terms.items(), key=lambda item: (sum(item[0][0]) + len(item[0][1]), tuple(-e for e in item[0][0]), item[0][1]))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        text = ""
        for monomial, coef in self.sorted_terms():
            body = self._monomial_text(monomial)
            magnitude = abs(coef)
            if not body:
                piece = str(magnitude)
            elif magnitude == 1:
                piece = body
            else:
                piece = f"{magnitude} {body}"
            if not text:
                text = piece if coef > 0 else f"-{piece}"
            else:
                text += f" + {piece}" if coef > 0 else f" - {piece}"
        return text

    def __repr__(self) -> str:
        return f"SuperPolynomial({self})"


class SuperVectorField:
    """Derivation sum_c X^c d/dc with polynomial coefficients."""

    __slots__ = ("system", "components")

    def __init__(self, system: CoordinateSystem, components: Optional[Mapping[str, SuperPolynomial]] = None):
        self.system = system
        self.components: Dict[str, SuperPolynomial] = {}
        for name, poly in (components or {}).items():
            system.parity(name)
            if poly.system != system:
                raise CoordinateMismatchError("Coefficient on a different coordinate system")
            if poly:
                self.components[name] = poly

    @classmethod
    def zero(cls, system: CoordinateSystem) -> SuperVectorField:
        return cls(system)

    @classmethod
    def partial(cls, system: CoordinateSystem, name: str) -> SuperVectorField:
        return cls(system, {name: SuperPolynomial.constant(system, 1)})

    def _same(self, other: SuperVectorField):
        if self.system != other.system:
            raise CoordinateMismatchError("Vector fields live on different coordinate systems")

    def component(self, name: str) -> SuperPolynomial:
        return self.components.get(name, SuperPolynomial.zero(self.system))

    def __add__(self, other: SuperVectorField) -> SuperVectorField:
        self._same(other)
        names = set(self.components) | set(other.components)
        return SuperVectorField(self.system, {n: self.component(n) + other.component(n) for n in names})

    def __neg__(self) -> SuperVectorField:
        return SuperVectorField(self.system, {n: -p for n, p in self.components.items()})

    def __sub__(self, other: SuperVectorField) -> SuperVectorField:
        return self + (-other)

    def scale(self, coef: Any) -> SuperVectorField:
        return SuperVectorField(self.system, {n: p.scale(coef) for n, p in self.components.items()})

    def times(self, poly: SuperPolynomial) -> SuperVectorField:
        """Left multiplication f * X."""
        return SuperVectorField(self.system, {n: poly * p for n, p in self.components.items()})

    def apply(self, f: SuperPolynomial) -> SuperPolynomial:
        """X(f) = sum_c X^c * d_c f."""
        if f.system != self.system:
            raise CoordinateMismatchError("Polynomial on a different coordinate system")
        result = SuperPolynomial.zero(self.system)
        for name, coef in self.components.items():
            result = result + coef * f.derivative(name)
        return result

    def parity_parts(self) -> Tuple[SuperVectorField, SuperVectorField]:
        even: Dict[str, SuperPolynomial] = {}
        odd: Dict[str, SuperPolynomial] = {}
        for name, poly in self.components.items():
            poly_even, poly_odd = poly.parity_parts()
            if self.system.parity(name):
                even[name], odd[name] = poly_odd, poly_even
            else:
                even[name], odd[name] = poly_even, poly_odd
        return SuperVectorField(self.system, even), SuperVectorField(self.system, odd)

    @property
    def parity(self) -> Optional[Parity]:
        even, odd = self.parity_parts()
        if bool(even) == bool(odd):
            return None
        return Parity.EVEN if even else Parity.ODD

    def bracket(self, other: SuperVectorField) -> SuperVectorField:
        """[X, Y] = XY - (-1)^(|X||Y|) YX, bilinear over parity parts."""
        self._same(other)
        result = SuperVectorField.zero(self.system)
        for x, px in zip(self.parity_parts(), (Parity.EVEN, Parity.ODD)):
            if not x:
                continue
            for y, py in zip(other.parity_parts(), (Parity.EVEN, Parity.ODD)):
                if not y:
                    continue
                sign = px.sign(py)
                components = {}
                for name in self.system.names:
                    value = x.apply(y.component(name)) - y.apply(x.component(name)).scale(sign)
                    if value:
                        components[name] = value
                result = result + SuperVectorField(self.system, components)
        return result

    def at_origin(self) -> SparseVector:
        """Constant parts of the coefficients, indexed by even-first coordinate position."""
        result: SparseVector = {}
        for name, poly in self.components.items():
            value = poly.constant_term
            if value:
                result[self.system.index(name)] = value
        return result

    def __bool__(self) -> bool:
        return bool(self.components)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SuperVectorField):
            return NotImplemented
        return self.system == other.system and self.components == other.components

    __hash__ = None

    def __str__(self) -> str:
        if not self.components:
            return "0"
        parts = [f"({self.components[n]}) D[{n}]" for n in self.system.names if n in self.components]
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"SuperVectorField({self})"


class TermIndex:
    """Assigns stable integer keys to (coordinate, monomial) pairs for span computations."""

    def __init__(self):
        self._keys: Dict[Tuple[str, Monomial], int] = {}

    def key(self, name: str, monomial: Monomial) -> int:
        return self._keys.setdefault((name, monomial), len(self._keys))

    def field_vector(self, field: SuperVectorField) -> SparseVector:
        vector: SparseVector = {}
        for name, poly in field.components.items():
            for monomial, coef in poly.terms.items():
                vector[self.key(name, monomial)] = coef
        return vector

    def poly_vector(self, poly: SuperPolynomial) -> SparseVector:
        return {self.key("", monomial): coef for monomial, coef in poly.terms.items()}

"""Root data of G(3) and F(4): simple systems, root enumeration, parabolic gradings."""

from __future__ import annotations
from fractions import Fraction
from itertools import combinations, product
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple, Union

import structlog

from models.roots import (
    AmbientWeight,
    DarkCase,
    DiagramId,
    InvalidDiagramError,
    MixedAlgebraError,
    ParabolicId,
    RootVector,
    SuperAlgebraName,
)
from models.superalgebra import Parity, SuperDim
from utils.renderers import render_root_table


logger = structlog.get_logger()

G3 = SuperAlgebraName.G3
F4 = SuperAlgebraName.F4

# Coefficient bound for the bounded root search.
MAX_ROOT_COEFF = 4


def _w(delta, e1, e2, e3) -> Tuple[Fraction, ...]:
    return tuple(Fraction(c) for c in (delta, e1, e2, e3))


_h = Fraction(1, 2)

# Simple roots alpha_1..alpha_r in (delta, e1, e2, e3) coordinates.
SIMPLE_SYSTEMS: Dict[SuperAlgebraName, Dict[str, Tuple[Tuple[Fraction, ...], ...]]] = {
    G3: {
        "I": (_w(1, -1, -1, 0), _w(0, 1, 0, 0), _w(0, -1, 1, 0)),
        "II": (_w(-1, 1, 1, 0), _w(1, 0, -1, 0), _w(0, -1, 1, 0)),
        "III": (_w(-1, 0, 1, 0), _w(1, -1, 0, 0), _w(0, 1, 0, 0)),
        "IV": (_w(0, -1, 1, 0), _w(-1, 1, 0, 0), _w(1, 0, 0, 0)),
    },
    F4: {
        "I": (_w(_h, -_h, -_h, -_h), _w(0, 0, 0, 1), _w(0, 0, 1, -1), _w(0, 1, -1, 0)),
        "II": (_w(-_h, _h, _h, _h), _w(_h, -_h, -_h, _h), _w(0, 0, 1, -1), _w(0, 1, -1, 0)),
        "III": (_w(0, 1, -1, 0), _w(_h, -_h, _h, -_h), _w(-_h, _h, _h, -_h), _w(0, 0, 0, 1)),
        "IV": (_w(_h, _h, -_h, -_h), _w(_h, -_h, _h, _h), _w(-_h, _h, -_h, _h), _w(0, 0, 1, -1)),
        "V": (_w(1, 0, 0, 0), _w(-_h, _h, -_h, -_h), _w(0, 0, 0, 1), _w(0, 0, 1, -1)),
        "VI": (_w(1, 0, 0, 0), _w(-_h, -_h, _h, _h), _w(0, 1, -1, 0), _w(0, 0, 1, -1)),
    },
}

EQUIVALENCE_CHAINS: Dict[SuperAlgebraName, Tuple[Tuple[Tuple[str, str], ...], ...]] = {
    G3: (
        (("III", "1"), ("IV", "1")),
        (("II", "1"), ("III", "3"), ("IV", "3")),
        (("III", "13"), ("IV", "13")),
    ),
    F4: (
        (("I", "4"), ("II", "4"), ("III", "1"), ("IV", "1"), ("V", "1")),
        (("III", "3"), ("IV", "4"), ("V", "4"), ("VI", "4")),
    ),
}

# members, prolongation, der_0(m), its dimension, reduction, its dimension
_DARK_DATA = {
    G3: (
        ((("I", "1"),), "k(1|7)", "co(7)", (22, 0), "G(2)+C", (15, 0)),
        ((("III", "1"), ("IV", "1")), "k(5|4)", "cspo(4|4)", (17, 16), "cosp(3|2)", (7, 6)),
    ),
    F4: (
        ((("I", "1"),), "k(1|8)", "co(8)", (29, 0), "cspin(7)", (22, 0)),
        (
            (("I", "4"), ("II", "4"), ("III", "1"), ("IV", "1"), ("V", "1")),
            "vect(6|4)", "gl(6|4)", (52, 48), "cosp(2|4)", (12, 8),
        ),
        (
            (("III", "3"), ("IV", "4"), ("V", "4"), ("VI", "4")),
            "k(7|4)", "cosp(6|4)", (28, 24), "cosp(4|2;1/2)", (10, 8),
        ),
    ),
}


def _ambient_sets(algebra: SuperAlgebraName) -> Tuple[FrozenSet, FrozenSet]:
    """Even and odd roots as canonical coefficient tuples."""
    even: List[AmbientWeight] = []
    odd: List[AmbientWeight] = []
    e = [AmbientWeight(algebra, _w(*(1 if k == i else 0 for k in range(4)))) for i in range(4)]
    delta, eps = e[0], e[1:]
    if algebra is G3:
        for sign in (1, -1):
            even.append(delta * (2 * sign))
            odd.append(delta * sign)
            for i in range(3):
                even.append(eps[i] * sign)
                odd.append(delta * sign + eps[i])
                odd.append(delta * sign - eps[i])
        for i, j in product(range(3), repeat=2):
            if i != j:
                even.append(eps[i] - eps[j])
    else:
        for sign in (1, -1):
            even.append(delta * sign)
            for i in range(3):
                even.append(eps[i] * sign)
        for i, j in combinations(range(3), 2):
            for si, sj in product((1, -1), repeat=2):
                even.append(eps[i] * si + eps[j] * sj)
        for signs in product((1, -1), repeat=4):
            odd.append(sum((v * s for v, s in zip(e, signs)), AmbientWeight.zero(algebra)) * _h)
    return frozenset(w.coeffs for w in even), frozenset(w.coeffs for w in odd)


class RootSystemService:
    """Root systems, parabolic gradings and parabolic identifications."""

    def __init__(self):
        self._sets: Dict[SuperAlgebraName, Tuple[FrozenSet, FrozenSet]] = {}
        self._roots: Dict[DiagramId, List[RootVector]] = {}
        self._classes: Dict[SuperAlgebraName, List[List[ParabolicId]]] = {}

    def simple_system(self, diagram: DiagramId) -> List[AmbientWeight]:
        """Simple roots alpha_1..alpha_r of the diagram."""
        return [AmbientWeight(diagram.algebra, coeffs) for coeffs in SIMPLE_SYSTEMS[diagram.algebra][diagram.xi]]

    def killing_pairing(self, a: AmbientWeight, b: AmbientWeight) -> Fraction:
        """Invariant form on h*; for G(3) evaluated on canonical coordinates (e3 eliminated)."""
        if a.algebra is not b.algebra:
            raise MixedAlgebraError(f"Cannot pair {a.algebra.value} and {b.algebra.value} weights")
        d, x, y, z = a.coeffs
        d2, x2, y2, z2 = b.coeffs
        if a.algebra is G3:
            return 2 * d * d2 - 2 * x * x2 + x * y2 + y * x2 - 2 * y * y2
        return -3 * d * d2 + x * x2 + y * y2 + z * z2

    def root_parity(self, weight: AmbientWeight) -> Optional[Parity]:
        """Parity of a root, None when the weight is not a root."""
        if weight.algebra not in self._sets:
            self._sets[weight.algebra] = _ambient_sets(weight.algebra)
        even, odd = self._sets[weight.algebra]
        if weight.coeffs in even:
            return Parity.EVEN
        if weight.coeffs in odd:
            return Parity.ODD
        return None

    def ambient_of(self, diagram: DiagramId, coeffs: Sequence[int]) -> AmbientWeight:
        simple = self.simple_system(diagram)
        total = AmbientWeight.zero(diagram.algebra)
        for c, alpha in zip(coeffs, simple):
            if c:
                total = total + alpha * c
        return total

    def enumerate_roots(self, diagram: DiagramId) -> List[RootVector]:
        """All roots of the diagram: positive ones ordered by height, then their negatives."""
        if diagram in self._roots:
            return list(self._roots[diagram])

        positive: List[RootVector] = []
        for coeffs in product(range(MAX_ROOT_COEFF + 1), repeat=diagram.rank):
            if not any(coeffs):
                continue
            ambient = self.ambient_of(diagram, coeffs)
            parity = self.root_parity(ambient)
            if parity is None:
                continue
            positive.append(RootVector(diagram, tuple(coeffs), parity, ambient))
        positive.sort(key=lambda r: (r.height, tuple(-c for c in r.coeffs)))
        roots = positive + [r.negated() for r in positive]

        logger.debug(
            "Roots enumerated",
            diagram=str(diagram),
            even=sum(1 for r in positive if not r.parity),
            odd=sum(1 for r in positive if r.parity),
        )
        self._roots[diagram] = roots
        return list(roots)

    def positive_roots(self, diagram: DiagramId) -> List[RootVector]:
        return [r for r in self.enumerate_roots(diagram) if r.is_positive]

    def negative_roots(self, diagram: DiagramId) -> List[RootVector]:
        return [r for r in self.enumerate_roots(diagram) if not r.is_positive]

    def simple_parities(self, diagram: DiagramId) -> List[Parity]:
        return [self.root_parity(alpha) for alpha in self.simple_system(diagram)]

    def cartan_matrix(self, diagram: DiagramId) -> List[List[Fraction]]:
        """Symmetric Cartan matrix a_ij = <alpha_i, alpha_j>."""
        simple = self.simple_system(diagram)
        return [[self.killing_pairing(a, b) for b in simple] for a in simple]

    def grading_weight(self, root: Union[RootVector, Sequence[int]], parabolic: ParabolicId) -> int:
        """Sum of the crossed coefficients of a root."""
        coeffs = root.coeffs if isinstance(root, RootVector) else tuple(root)
        if len(coeffs) != parabolic.diagram.rank:
            raise InvalidDiagramError(f"Root {coeffs} does not belong to {parabolic.diagram}")
        return sum(coeffs[k - 1] for k in parabolic.crossing)

    def depth(self, parabolic: ParabolicId) -> int:
        return max(-self.grading_weight(r, parabolic) for r in self.negative_roots(parabolic.diagram))

    def all_parabolics(self, algebra: SuperAlgebraName) -> List[ParabolicId]:
        result = []
        for xi in algebra.diagrams:
            diagram = DiagramId(algebra, xi)
            for size in range(1, diagram.rank + 1):
                for crossing in combinations(range(1, diagram.rank + 1), size):
                    result.append(ParabolicId(diagram, crossing))
        return sorted(result, key=ParabolicId.sort_key)

    def nilradical_weights(self, parabolic: ParabolicId) -> FrozenSet[Tuple[Fraction, ...]]:
        """Ambient weights of the negatively graded roots; equal sets mean equal parabolics."""
        return frozenset(
            r.ambient.coeffs for r in self.negative_roots(parabolic.diagram)
            if self.grading_weight(r, parabolic) < 0
        )

    def parabolic_classes(self, algebra: SuperAlgebraName) -> List[List[ParabolicId]]:
        """Parabolics grouped by literal equality; each class starts with its representative."""
        if algebra in self._classes:
            return [list(c) for c in self._classes[algebra]]

        groups: Dict[FrozenSet, List[ParabolicId]] = {}
        for parabolic in self.all_parabolics(algebra):
            groups.setdefault(self.nilradical_weights(parabolic), []).append(parabolic)
        classes = sorted(groups.values(), key=lambda members: members[0].sort_key())

        logger.info("Parabolic classes computed", algebra=algebra.value, classes=len(classes))
        self._classes[algebra] = classes
        return [list(c) for c in classes]

    def representatives(self, algebra: SuperAlgebraName) -> List[ParabolicId]:
        return [members[0] for members in self.parabolic_classes(algebra)]

    def representative(self, parabolic: ParabolicId) -> ParabolicId:
        for members in self.parabolic_classes(parabolic.algebra):
            if parabolic in members:
                return members[0]
        raise InvalidDiagramError(f"No class for {parabolic}")

    def equivalence_chains(self, algebra: SuperAlgebraName) -> List[List[ParabolicId]]:
        """Identifications recorded in the reference tables."""
        return [
            [ParabolicId.parse(algebra.value, xi, crossing) for xi, crossing in chain]
            for chain in EQUIVALENCE_CHAINS[algebra]
        ]

    def dark_cases(self, algebra: SuperAlgebraName) -> List[DarkCase]:
        cases = []
        for members, prolongation, der0_name, der0_dim, reduction_name, reduction_dim in _DARK_DATA[algebra]:
            cases.append(DarkCase(
                members=tuple(ParabolicId.parse(algebra.value, xi, crossing) for xi, crossing in members),
                prolongation=prolongation,
                der0_name=der0_name,
                der0_dim=SuperDim(*der0_dim),
                reduction_name=reduction_name,
                reduction_dim=SuperDim(*reduction_dim),
            ))
        return cases

    def dark_case_for(self, parabolic: ParabolicId) -> Optional[DarkCase]:
        """Dark case containing the parabolic or any parabolic equal to it."""
        representative = self.representative(parabolic)
        for case in self.dark_cases(parabolic.algebra):
            if any(self.representative(member) == representative for member in case.members):
                return case
        return None

    def negative_root_table(self, diagram: DiagramId) -> str:
        """Even and odd negative roots as columns of |m_1..m_r|."""
        negative = self.negative_roots(diagram)
        columns = {
            parity: [tuple(-c for c in r.coeffs) for r in negative if r.parity == parity]
            for parity in (Parity.EVEN, Parity.ODD)
        }
        return render_root_table(str(diagram), diagram.rank, columns)


root_system = RootSystemService()

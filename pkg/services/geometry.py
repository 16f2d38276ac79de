"""Geometric invariants read off symbol algebras.

Growth vectors, the span of odd null directions in g_-1, graded-abelian
(integral) subspaces of g_-1, the adjacency graph of parabolics and the atlas
of all non-equivalent cases.

g_-1 is a sum of one-dimensional, pairwise distinct root spaces, so every
subspace invariant under the Cartan torus is spanned by root vectors. The null
cone and the variety of abelian subspaces are torus invariant, which keeps the
searches below finite.
"""

from __future__ import annotations
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

import structlog

from models.reports import EquivalenceReport, IntegralSearchResult, NullSpanReport
from models.roots import ParabolicId, SuperAlgebraName
from models.superalgebra import GradedLieSuperalgebra, SuperDim
from services.algebra_builder import algebra_builder, parabolic_of
from services.root_system import root_system
from utils.linalg import SparseVector, add_scaled
from utils.renderers import render_atlas


logger = structlog.get_logger()

G3 = SuperAlgebraName.G3
F4 = SuperAlgebraName.F4

# Parabolics whose odd null directions do not span g_-1, with the null span.
SPECIAL_NULL_SPANS: Dict[SuperAlgebraName, Dict[Tuple[str, str], SuperDim]] = {
    G3: {
        ("II", "1"): SuperDim(2, 1),
        ("III", "13"): SuperDim(2, 1),
        ("IV", "23"): SuperDim(0, 2),
        ("IV", "123"): SuperDim(1, 1),
    },
    F4: {},
}

# Maximal dimensions of integral subspaces for the maximal parabolics.
MAXIMAL_INTEGRALS: Dict[SuperAlgebraName, Tuple[Tuple[str, str, Tuple[SuperDim, ...]], ...]] = {
    G3: (
        ("I", "1", (SuperDim(0, 3),)),
        ("I", "2", (SuperDim(1, 1), SuperDim(0, 2))),
        ("I", "3", (SuperDim(2, 1),)),
        ("II", "1", (SuperDim(1, 1),)),
        ("III", "1", (SuperDim(2, 2),)),
        ("IV", "2", (SuperDim(1, 2),)),
    ),
    F4: (
        ("I", "1", (SuperDim(0, 4),)),
        ("I", "2", (SuperDim(1, 1), SuperDim(0, 3))),
        ("I", "3", (SuperDim(3, 2),)),
        ("I", "4", (SuperDim(6, 4),)),
        ("II", "1", (SuperDim(1, 3), SuperDim(2, 2))),
        ("III", "3", (SuperDim(3, 2),)),
        ("IV", "3", (SuperDim(2, 2),)),
        ("V", "2", (SuperDim(0, 4),)),
        ("VI", "2", (SuperDim(0, 3),)),
    ),
}


@dataclass
class SpecialCasesReport:
    """Parabolics whose null directions fail to span g_-1, against the reference list."""
    success: bool
    special: List[NullSpanReport] = field(default_factory=list)
    mismatches: List[str] = field(default_factory=list)

    def labels(self) -> List[str]:
        return [report.parabolic.label for report in self.special]


def _poly_trim(p: List[Fraction]) -> List[Fraction]:
    while p and not p[-1]:
        p = p[:-1]
    return p


def _poly_mod(p: List[Fraction], q: List[Fraction]) -> List[Fraction]:
    p = list(p)
    while len(p) >= len(q):
        coef = p[-1] / q[-1]
        shift = len(p) - len(q)
        for n, c in enumerate(q):
            p[shift + n] -= coef * c
        p = _poly_trim(p)
    return p


def _poly_gcd(p: List[Fraction], q: List[Fraction]) -> List[Fraction]:
    p, q = _poly_trim(p), _poly_trim(q)
    while q:
        p, q = q, _poly_mod(p, q)
    return p


def _common_nonzero_root(polys: Sequence[List[Fraction]]) -> Optional[Tuple[int, Optional[Fraction]]]:
    """Degree of the common factor of the polynomials and its rational root if linear.

    Returns None when the only common complex root is 0 or there is none.
    """
    g: List[Fraction] = []
    for p in polys:
        g = _poly_gcd(g, p) if g else _poly_trim(p)
        if g and len(g) == 1:
            return None
    if not g:
        # every component vanishes identically
        return 0, Fraction(1)
    # divide out the root at 0
    while len(g) > 1 and not g[0]:
        g = g[1:]
    if len(g) == 1:
        return None
    if len(g) == 2:
        return 1, -g[0] / g[1]
    return len(g) - 1, None


class GeometryService:
    """Growth vectors, null spans, integral witnesses and the parabolic graph."""

    def growth_vector(self, symbol: GradedLieSuperalgebra) -> List[SuperDim]:
        """Super dimensions of g_-1, g_-2, ..., g_-depth."""
        dims = symbol.graded_dims()
        depth = -min(dims)
        return [dims.get(-t, SuperDim()) for t in range(1, depth + 1)]

    def _null_witness(self, symbol: GradedLieSuperalgebra, alpha: int, odd: Sequence[int]) -> Optional[str]:
        """A null vector with nonzero e_alpha component, as a readable string."""
        unit = {alpha: Fraction(1)}
        if not symbol.bracket(unit, unit):
            return symbol.basis[alpha].label
        others = [i for i in odd if i != alpha]
        bases: List[Tuple[SparseVector, str]] = [(unit, symbol.basis[alpha].label)]
        for beta in others:
            bases.append(({alpha: Fraction(1), beta: Fraction(1)}, f"{symbol.basis[alpha].label} + {symbol.basis[beta].label}"))
        for base, text in bases:
            if len(base) > 1 and not symbol.bracket(base, base):
                return text
            for gamma in others:
                if gamma in base:
                    continue
                e = {gamma: Fraction(1)}
                a = symbol.bracket(base, base)
                b = symbol.bracket(base, e)
                c = symbol.bracket(e, e)
                keys = set(a) | set(b) | set(c)
                polys = [[a.get(k, Fraction(0)), 2 * b.get(k, Fraction(0)), c.get(k, Fraction(0))] for k in keys]
                found = _common_nonzero_root(polys)
                if found is None:
                    continue
                degree, root = found
                if root is not None:
                    v = dict(base)
                    add_scaled(v, e, root)
                    if symbol.bracket(v, v):
                        continue
                    return f"{text} + ({root}) {symbol.basis[gamma].label}"
                return f"{text} + t {symbol.basis[gamma].label} with t a root of a degree {degree} factor"
        return None

    def null_span(self, symbol: GradedLieSuperalgebra) -> NullSpanReport:
        """Span of the vectors v of g_-1 with [v, v] = 0."""
        parabolic = parabolic_of(symbol)
        minus_one = symbol.indices_of_degree(-1)
        even = [i for i in minus_one if not symbol.basis[i].parity]
        odd = [i for i in minus_one if symbol.basis[i].parity]
        witnesses = [symbol.basis[i].label for i in even]
        odd_null = 0
        for alpha in odd:
            witness = self._null_witness(symbol, alpha, odd)
            if witness is not None:
                odd_null += 1
                witnesses.append(witness)
        report = NullSpanReport(
            parabolic=parabolic,
            minus_one=SuperDim(len(even), len(odd)),
            span=SuperDim(len(even), odd_null),
            witnesses=witnesses,
        )
        logger.debug("Null span computed", parabolic=str(parabolic), span=str(report.span), full=report.full)
        return report

    def special_cases_check(self, algebra: SuperAlgebraName) -> SpecialCasesReport:
        """Compare the parabolics with a deficient null span against the reference list."""
        expected = {
            root_system.representative(ParabolicId.parse(algebra.value, xi, crossing)): span
            for (xi, crossing), span in SPECIAL_NULL_SPANS[algebra].items()
        }
        special = []
        mismatches = []
        for parabolic in root_system.representatives(algebra):
            report = self.null_span(algebra_builder.build_symbol(parabolic))
            if not report.full:
                special.append(report)
            want = expected.get(parabolic)
            if want is None and not report.full:
                mismatches.append(f"{parabolic}: unexpected null span {report.span} in {report.minus_one}")
            elif want is not None and report.span != want:
                mismatches.append(f"{parabolic}: null span {report.span}, expected {want}")
        result = SpecialCasesReport(success=not mismatches, special=special, mismatches=mismatches)
        logger.info("Special cases checked", algebra=algebra.value, special=result.labels(), success=result.success)
        return result

    def integral_witness(self, symbol: GradedLieSuperalgebra, target: SuperDim) -> IntegralSearchResult:
        """Search for a graded-abelian subspace of g_-1 spanned by root vectors."""
        parabolic = parabolic_of(symbol)
        minus_one = symbol.indices_of_degree(-1)
        even = [i for i in minus_one if not symbol.basis[i].parity]
        odd = [i for i in minus_one if symbol.basis[i].parity and not symbol.bracket_basis(i, i)]
        result = IntegralSearchResult(parabolic=parabolic, target=target)
        if not target.fits_in(SuperDim.count(symbol.basis[i].parity for i in minus_one)):
            return result

        def commuting(members: Sequence[int]) -> bool:
            return all(not symbol.bracket_basis(a, b) for a, b in combinations(members, 2))

        for even_part in combinations(even, target.even):
            if not commuting(even_part):
                continue
            for odd_part in combinations(odd, target.odd):
                members = list(even_part) + list(odd_part)
                if commuting(members):
                    result.witness = [{i: Fraction(1)} for i in members]
                    result.labels = [symbol.basis[i].label for i in members]
                    logger.debug("Integral witness found", parabolic=str(parabolic), target=str(target), labels=result.labels)
                    return result
        return result

    def maximal_integrals(self, algebra: SuperAlgebraName) -> List[Tuple[ParabolicId, Tuple[SuperDim, ...]]]:
        return [
            (ParabolicId.parse(algebra.value, xi, crossing), dims)
            for xi, crossing, dims in MAXIMAL_INTEGRALS[algebra]
        ]

    def adjacency_graph(self, algebra: SuperAlgebraName) -> List[Tuple[ParabolicId, ParabolicId]]:
        """Edges between class representatives whose crossing sets differ by one node."""
        edges = set()
        parabolics = root_system.all_parabolics(algebra)
        for first, second in combinations(parabolics, 2):
            if first.diagram != second.diagram:
                continue
            if len(set(first.crossing) ^ set(second.crossing)) != 1:
                continue
            a, b = root_system.representative(first), root_system.representative(second)
            if a == b:
                continue
            if b.sort_key() < a.sort_key():
                a, b = b, a
            edges.add((a, b))
        return sorted(edges, key=lambda edge: (edge[0].sort_key(), edge[1].sort_key()))

    def compare_symbols(self, first: GradedLieSuperalgebra, second: GradedLieSuperalgebra) -> Optional[str]:
        """Reason two symbol algebras differ in growth or bracket ranks, None if they agree."""
        if self.growth_vector(first) != self.growth_vector(second):
            return "growth vectors differ"
        degrees = sorted(first.graded_dims())
        for n, a in enumerate(degrees):
            for b in degrees[n:]:
                if first.bracket_rank(a, b) != second.bracket_rank(a, b):
                    return f"bracket ranks differ on degrees ({a}, {b})"
        return None

    def verify_equivalences(self, algebra: SuperAlgebraName) -> EquivalenceReport:
        """Check every recorded identification chain."""
        report = EquivalenceReport(success=True)
        for chain in root_system.equivalence_chains(algebra):
            report.chains_checked += 1
            head = chain[0]
            head_symbol = algebra_builder.build_symbol(head)
            for member in chain[1:]:
                if root_system.representative(member) != root_system.representative(head):
                    report.mismatches.append(f"{member} and {head} are different parabolics")
                    continue
                reason = self.compare_symbols(head_symbol, algebra_builder.build_symbol(member))
                if reason is not None:
                    report.mismatches.append(f"{member} vs {head}: {reason}")
        report.success = not report.mismatches
        logger.info("Equivalences verified", algebra=algebra.value, chains=report.chains_checked, success=report.success)
        return report

    def atlas_rows(self, algebra: SuperAlgebraName) -> List[Tuple[str, SuperDim, int, List[SuperDim]]]:
        rows = []
        for parabolic in root_system.representatives(algebra):
            symbol = algebra_builder.build_symbol(parabolic)
            growth = self.growth_vector(symbol)
            rows.append((parabolic.label, symbol.superdim, len(growth), growth))
        return rows

    def atlas(self, algebra: SuperAlgebraName) -> str:
        """Growth-vector table of all non-equivalent parabolics."""
        return render_atlas(algebra.display, self.atlas_rows(algebra))


geometry_service = GeometryService()

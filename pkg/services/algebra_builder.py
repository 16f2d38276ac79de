"""Construction of the full G(3)/F(4) algebras and of their parabolic symbol algebras.

The full algebra is built from the Cartan data of a diagram. Root spaces of
n- and n+ are generated height by height; an element is identified with the
vector of its images under the opposite simple generators, which is injective
on the simple quotient. Structure constants are then read off adjoint
matrices and rescaled so that one bracket per non-simple root equals 1.

Symbol algebras do not go through the full algebra. n- is rebuilt on its own
from the negative roots: the first nonzero bracket onto each root is fixed to 1
and every other constant is solved from the Jacobi identity with the raising
generators, height by height. A crossing set then regrades that n-.
"""

from __future__ import annotations
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import structlog

from models.prolongation import ReductionSpec
from models.reports import CrossCheckReport
from models.roots import DiagramId, InvalidDiagramError, ParabolicId, SuperAlgebraName
from models.superalgebra import (
    BasisElement,
    GradedLieSuperalgebra,
    GradedMap,
    Parity,
    StructureTable,
    SuperDim,
)
from services.root_system import root_system
from utils.linalg import EchelonBasis, ExactMatrix, SparseVector, add_scaled, scaled, solve


logger = structlog.get_logger()


class StructureConstantError(Exception):
    """Raised when the structure constants cannot be constructed consistently."""
    pass


@dataclass
class _Node:
    coeffs: Tuple[int, ...]
    parity: Parity
    simple: Optional[int] = None
    phi: SparseVector = field(default_factory=dict)
    presentation: Optional[Tuple[int, int]] = None

    @property
    def height(self) -> int:
        return sum(self.coeffs)


@dataclass
class _Half:
    """Root vectors of n- (sign -1) or n+ (sign +1) with the generator action."""
    sign: int
    nodes: List[_Node] = field(default_factory=list)
    table: Dict[Tuple[int, int], SparseVector] = field(default_factory=dict)


def _order_key(coeffs: Sequence[int]) -> Tuple[int, Tuple[int, ...]]:
    return sum(coeffs), tuple(-c for c in coeffs)


def _unit(rank: int, i: int) -> Tuple[int, ...]:
    return tuple(1 if k == i else 0 for k in range(rank))


def _difference_index(larger: Sequence[int], smaller: Sequence[int]) -> int:
    diff = [a - b for a, b in zip(larger, smaller)]
    if sorted(diff) != [0] * (len(diff) - 1) + [1]:
        raise StructureConstantError(f"{larger} - {smaller} is not a simple root")
    return diff.index(1)


def _ratio(vector: SparseVector, base: SparseVector) -> Optional[Fraction]:
    key = min(base)
    coef = vector.get(key, Fraction(0)) / base[key]
    if not coef or scaled(base, coef) != vector:
        return None
    return coef


def _canonical_key(element: BasisElement) -> Tuple[int, int, str]:
    return -element.degree, int(element.parity), element.label


def crossing_weight(multidegree: Sequence[int], crossing: Sequence[int]) -> int:
    return sum(multidegree[k - 1] for k in crossing)


def parabolic_of(algebra: GradedLieSuperalgebra) -> ParabolicId:
    """Parabolic recorded in the metadata of a symbol or regraded algebra."""
    meta = algebra.metadata
    try:
        return ParabolicId.of(meta["algebra"], meta["diagram"], meta["crossing"])
    except KeyError as e:
        raise InvalidDiagramError(f"Algebra carries no parabolic metadata: {e}")


class AlgebraBuilder:
    """Builds full algebras per diagram and symbol algebras per parabolic."""

    def __init__(self):
        self._full: Dict[DiagramId, GradedLieSuperalgebra] = {}
        self._borel: Dict[DiagramId, GradedLieSuperalgebra] = {}
        self._regraded: Dict[ParabolicId, GradedLieSuperalgebra] = {}

    def _phi(
        self,
        half: _Half,
        i: int,
        y: int,
        cartan: List[List[Fraction]],
        parities: List[Parity],
        kappa: List[Fraction],
    ) -> SparseVector:
        """Images of [g_i, y] under the opposite simple generators."""
        node = half.nodes[y]
        rank = len(parities)
        result: SparseVector = {}
        pairing = sum((node.coeffs[m] * cartan[i][m] for m in range(rank)), Fraction(0))
        add_scaled(result, {y: Fraction(1)}, kappa[i] * half.sign * pairing)
        if node.simple is not None:
            k = node.simple
            coef = parities[i].sign(parities[k]) * kappa[k] * (-half.sign) * cartan[k][i]
            add_scaled(result, {i: Fraction(1)}, coef)
        else:
            for z, c in node.phi.items():
                j = _difference_index(node.coeffs, half.nodes[z].coeffs)
                add_scaled(result, half.table.get((i, z), {}), c * parities[i].sign(parities[j]))
        return result

    def _build_half(self, diagram: DiagramId, sign: int) -> _Half:
        roots = {r.coeffs: r.parity for r in root_system.positive_roots(diagram)}
        cartan = root_system.cartan_matrix(diagram)
        parities = root_system.simple_parities(diagram)
        rank = diagram.rank
        if sign < 0:
            kappa = [Fraction(1)] * rank
        else:
            kappa = [Fraction(-p.sign(Parity.ODD)) for p in parities]

        half = _Half(sign=sign)
        for i in range(rank):
            half.nodes.append(_Node(_unit(rank, i), parities[i], simple=i))
        created = {node.coeffs for node in half.nodes}

        level = list(range(rank))
        while level:
            candidates: Dict[Tuple[int, ...], List[Tuple[int, int]]] = {}
            for y in level:
                for i in range(rank):
                    target = tuple(a + b for a, b in zip(half.nodes[y].coeffs, _unit(rank, i)))
                    candidates.setdefault(target, []).append((i, y))

            next_level = []
            for target in sorted(candidates, key=_order_key):
                new: Optional[int] = None
                for i, y in sorted(candidates[target]):
                    phi = self._phi(half, i, y, cartan, parities, kappa)
                    if not phi:
                        continue
                    if new is None:
                        if target not in roots:
                            raise StructureConstantError(f"Nonzero bracket at non-root {target} of {diagram}")
                        parity = parities[i] + half.nodes[y].parity
                        if parity != roots[target]:
                            raise StructureConstantError(f"Parity mismatch at root {target} of {diagram}")
                        new = len(half.nodes)
                        half.nodes.append(_Node(target, parity, phi=phi, presentation=(i, y)))
                        half.table[(i, y)] = {new: Fraction(1)}
                        created.add(target)
                        next_level.append(new)
                        continue
                    coef = _ratio(phi, half.nodes[new].phi)
                    if coef is None:
                        raise StructureConstantError(f"Root space {target} of {diagram} is not one-dimensional")
                    half.table[(i, y)] = {new: coef}
            level = next_level

        missing = set(roots) - created
        if missing:
            raise StructureConstantError(f"Roots {sorted(missing)} of {diagram} were not generated")
        return half

    def _generator_columns(
        self,
        own: _Half,
        other: _Half,
        i: int,
        offsets: Dict[int, int],
        cartan: List[List[Fraction]],
        kappa_other: List[Fraction],
        rank: int,
    ) -> List[SparseVector]:
        """Columns of ad(g_i) for the simple generator g_i of ``own``."""
        dim = 2 * len(own.nodes) + rank
        columns: List[SparseVector] = [dict() for _ in range(dim)]
        own_off, other_off, h_off = offsets[own.sign], offsets[other.sign], offsets[0]
        for y in range(len(own.nodes)):
            image = own.table.get((i, y), {})
            columns[own_off + y] = {own_off + k: c for k, c in image.items()}
        for k in range(rank):
            columns[h_off + k] = {own_off + i: -own.sign * cartan[k][i]}
        for x, node in enumerate(other.nodes):
            if node.simple is not None:
                if node.simple == i:
                    columns[other_off + x] = {h_off + i: kappa_other[i]}
                continue
            columns[other_off + x] = {
                other_off + z: c for z, c in node.phi.items()
                if _difference_index(node.coeffs, other.nodes[z].coeffs) == i
            }
        return columns

    def build_full(self, diagram: DiagramId) -> GradedLieSuperalgebra:
        """Full algebra of the diagram: n- in build order, then h_1..h_r, then n+."""
        if diagram in self._full:
            return self._full[diagram]

        logger.info("Building full algebra", diagram=str(diagram))
        minus = self._build_half(diagram, -1)
        plus = self._build_half(diagram, +1)
        cartan = root_system.cartan_matrix(diagram)
        parities = root_system.simple_parities(diagram)
        rank = diagram.rank
        n = len(minus.nodes)
        dim = 2 * n + rank
        offsets = {-1: 0, 0: n, 1: n + rank}
        kappa_minus = [Fraction(1)] * rank
        kappa_plus = [Fraction(-p.sign(Parity.ODD)) for p in parities]

        ad: Dict[int, ExactMatrix] = {}
        for i in range(rank):
            ad[i] = ExactMatrix.from_columns(
                self._generator_columns(minus, plus, i, offsets, cartan, kappa_plus, rank), dim
            )
            ad[n + rank + i] = ExactMatrix.from_columns(
                self._generator_columns(plus, minus, i, offsets, cartan, kappa_minus, rank), dim
            )
        for k in range(rank):
            diagonal = {}
            for half in (minus, plus):
                for x, node in enumerate(half.nodes):
                    value = half.sign * sum((node.coeffs[m] * cartan[k][m] for m in range(rank)), Fraction(0))
                    diagonal[(offsets[half.sign] + x, offsets[half.sign] + x)] = value
            ad[n + k] = ExactMatrix(dim, dim, diagonal)

        node_parity: Dict[int, Parity] = {}
        for half in (minus, plus):
            for x, node in enumerate(half.nodes):
                node_parity[offsets[half.sign] + x] = node.parity
        for k in range(rank):
            node_parity[n + k] = Parity.EVEN

        for half in (minus, plus):
            off = offsets[half.sign]
            for x, node in enumerate(half.nodes):
                if node.presentation is None:
                    continue
                i, y = node.presentation
                g, other = ad[off + i], ad[off + y]
                sign = Fraction(-parities[i].sign(half.nodes[y].parity))
                ad[off + x] = (g @ other).combine(other @ g, sign)

        raw = StructureTable([node_parity[k] for k in range(dim)])
        for a in range(dim):
            for b in range(a, dim):
                value = ad[a].column(b)
                if a == b and not node_parity[a] and value:
                    raise StructureConstantError(f"Even element {a} of {diagram} has a nonzero self-bracket")
                raw.set_bracket(a, b, value)

        basis = self._full_basis(diagram, minus, plus, offsets, rank)
        table = self._normalize(raw, basis, minus, plus, offsets, diagram)
        algebra = GradedLieSuperalgebra(
            basis=basis,
            table=table,
            metadata={"algebra": diagram.algebra.value, "diagram": diagram.xi, "route": "contragredient"},
        )

        if algebra.check_grading() is not None:
            raise StructureConstantError(f"Grading violated in full algebra of {diagram}")
        report = algebra.check_jacobi()
        if not report.success:
            raise StructureConstantError(f"{diagram}: {report.error_message}")

        logger.info("Full algebra built", diagram=str(diagram), dim=str(algebra.superdim), brackets=len(table))
        self._full[diagram] = algebra
        return algebra

    def _normalize(
        self,
        raw: StructureTable,
        basis: Sequence[BasisElement],
        minus: _Half,
        plus: _Half,
        offsets: Dict[int, int],
        diagram: DiagramId,
    ) -> StructureTable:
        """Rescale root vectors so the first bracket onto each root is 1.

        Pairs are ordered lexicographically by the canonical key
        (-degree, parity, label) of their two entries.
        """
        mu: Dict[int, Fraction] = {k: Fraction(1) for k in range(raw.size)}
        for half in (minus, plus):
            off = offsets[half.sign]
            members = sorted(range(off, off + len(half.nodes)), key=lambda k: _canonical_key(basis[k]))
            member_set = set(members)
            first: Dict[int, Tuple[int, int, Fraction]] = {}
            for n, a in enumerate(members):
                for b in members[n:]:
                    for k, c in raw.get(a, b).items():
                        if k not in first and k in member_set:
                            first[k] = (a, b, c)
            for x, node in enumerate(half.nodes):
                if node.simple is not None:
                    continue
                if off + x not in first:
                    raise StructureConstantError(f"Root vector {node.coeffs} of {diagram} is not a bracket")
                a, b, c = first[off + x]
                mu[off + x] = mu[a] * mu[b] * c

        table = StructureTable(raw.parities)
        for (a, b), value in raw.entries():
            table.set_bracket(a, b, {k: mu[a] * mu[b] * c / mu[k] for k, c in value.items()})
        return table

    def _full_basis(
        self,
        diagram: DiagramId,
        minus: _Half,
        plus: _Half,
        offsets: Dict[int, int],
        rank: int,
    ) -> List[BasisElement]:
        labels = {r.coeffs: r.label for r in root_system.enumerate_roots(diagram)}
        basis: List[BasisElement] = []
        for x, node in enumerate(minus.nodes):
            signed = tuple(-c for c in node.coeffs)
            basis.append(BasisElement(x, node.parity, -node.height, labels[signed], signed))
        for k in range(rank):
            basis.append(BasisElement(offsets[0] + k, Parity.EVEN, 0, f"h{k + 1}", (0,) * rank))
        for x, node in enumerate(plus.nodes):
            basis.append(BasisElement(offsets[1] + x, node.parity, node.height, labels[node.coeffs], node.coeffs))
        return basis

    def build_borel(self, diagram: DiagramId) -> GradedLieSuperalgebra:
        """n- of the diagram graded by height, built from the negative roots alone.

        Basis order is (height, parity, label). The first pair in that order
        with a nonzero bracket onto a root is set to 1; every other constant
        is the ratio of raising images, where the raising image of [x, y] is
        the vector of [e_i, [x, y]] over the simple raising generators e_i.
        """
        if diagram in self._borel:
            return self._borel[diagram]

        cartan = root_system.cartan_matrix(diagram)
        simple_parity = root_system.simple_parities(diagram)
        rank = diagram.rank
        labels = {r.coeffs: r.label for r in root_system.enumerate_roots(diagram)}
        roots = {r.coeffs: r.parity for r in root_system.negative_roots(diagram)}
        order = sorted(roots, key=lambda m: (-sum(m), int(roots[m]), labels[m]))
        index = {m: n for n, m in enumerate(order)}
        size = len(order)
        parity = [roots[m] for m in order]
        simple = {index[tuple(-u for u in _unit(rank, i))]: i for i in range(rank)}

        table = StructureTable(parity)
        raising: Dict[Tuple[int, int], SparseVector] = {}
        generated = set(simple)

        def weight(i: int, x: int) -> Fraction:
            return sum((order[x][m] * cartan[i][m] for m in range(rank)), Fraction(0))

        def raised(i: int, x: int, y: int) -> SparseVector:
            """[e_i, [x, y]] by the super Jacobi identity."""
            result: SparseVector = {}
            if x in simple:
                if simple[x] == i:
                    add_scaled(result, {y: Fraction(1)}, weight(i, y))
            else:
                for z, c in raising.get((i, x), {}).items():
                    add_scaled(result, table.get(z, y), c)
            sign = simple_parity[i].sign(parity[x])
            if y in simple:
                if simple[y] == i:
                    add_scaled(result, {x: Fraction(1)}, -sign * weight(i, x))
            else:
                for z, c in raising.get((i, y), {}).items():
                    add_scaled(result, table.get(x, z), sign * c)
            return result

        def image(x: int, y: int) -> SparseVector:
            flat: SparseVector = {}
            for i in range(rank):
                for k, c in raised(i, x, y).items():
                    flat[i * size + k] = c
            return flat

        pairs: Dict[Tuple[int, ...], List[Tuple[int, int]]] = {}
        for x in range(size):
            for y in range(x, size):
                if x == y and not parity[x]:
                    continue
                target = tuple(a + b for a, b in zip(order[x], order[y]))
                pairs.setdefault(target, []).append((x, y))

        for target in sorted(pairs, key=lambda m: -sum(m)):
            if target not in index:
                for x, y in pairs[target]:
                    if image(x, y):
                        raise StructureConstantError(f"Nonzero bracket at non-root {target} of {diagram}")
                continue
            new = index[target]
            base: Optional[SparseVector] = None
            for x, y in pairs[target]:
                vector = image(x, y)
                if not vector:
                    continue
                if base is None:
                    if parity[x] + parity[y] != parity[new]:
                        raise StructureConstantError(f"Parity mismatch at root {target} of {diagram}")
                    base = vector
                    table.set_bracket(x, y, {new: Fraction(1)})
                    for i in range(rank):
                        block = {k % size: c for k, c in vector.items() if k // size == i}
                        if block:
                            raising[(i, new)] = block
                    continue
                coef = _ratio(vector, base)
                if coef is None:
                    raise StructureConstantError(f"Root space {target} of {diagram} is not one-dimensional")
                table.set_bracket(x, y, {new: coef})
            if base is None:
                raise StructureConstantError(f"Root vector {target} of {diagram} is not a bracket")
            generated.add(new)

        missing = [order[n] for n in range(size) if n not in generated]
        if missing:
            raise StructureConstantError(f"Roots {missing} of {diagram} were not generated")

        basis = [
            BasisElement(n, parity[n], sum(m), labels[m], m)
            for n, m in enumerate(order)
        ]
        borel = GradedLieSuperalgebra(
            basis=basis,
            table=table,
            metadata={
                "algebra": diagram.algebra.value,
                "diagram": diagram.xi,
                "crossing": list(range(1, rank + 1)),
                "route": "borel",
            },
        )
        report = borel.check_jacobi()
        if not report.success:
            raise StructureConstantError(f"n- of {diagram}: {report.error_message}")

        logger.info("Borel nilradical built", diagram=str(diagram), dim=str(borel.superdim), brackets=len(table))
        self._borel[diagram] = borel
        return borel

    def build_symbol(self, parabolic: ParabolicId) -> GradedLieSuperalgebra:
        """Symbol algebra m of the parabolic, regraded from the Borel nilradical."""
        borel = self.build_borel(parabolic.diagram)
        keep = [b.index for b in borel.basis if crossing_weight(b.multidegree, parabolic.crossing) < 0]
        symbol = self._restrict(borel, keep, parabolic, route="symbol")
        if not self.is_fundamental(symbol):
            raise StructureConstantError(f"Symbol algebra of {parabolic} is not generated by its degree -1 part")
        logger.debug("Symbol algebra built", parabolic=str(parabolic), dim=str(symbol.superdim))
        return symbol

    def _restrict(
        self,
        source: GradedLieSuperalgebra,
        keep: Sequence[int],
        parabolic: ParabolicId,
        route: str,
    ) -> GradedLieSuperalgebra:
        basis = [
            BasisElement(
                index=n,
                parity=source.basis[old].parity,
                degree=crossing_weight(source.basis[old].multidegree, parabolic.crossing),
                label=source.basis[old].label,
                multidegree=source.basis[old].multidegree,
            )
            for n, old in enumerate(keep)
        ]
        return GradedLieSuperalgebra(
            basis=basis,
            table=source.table.restricted(keep),
            metadata={
                "algebra": parabolic.algebra.value,
                "diagram": parabolic.diagram.xi,
                "crossing": list(parabolic.crossing),
                "route": route,
            },
        )

    def regrade(self, symbol: GradedLieSuperalgebra, crossing: Sequence[int]) -> GradedLieSuperalgebra:
        """Symbol algebra of a smaller crossing set read off an existing symbol algebra."""
        current = parabolic_of(symbol)
        target = ParabolicId(current.diagram, tuple(crossing))
        if not set(target.crossing) <= set(current.crossing):
            raise InvalidDiagramError(
                f"Cannot regrade {current} to crossing {target.crossing}: roots of the new nilradical are missing"
            )
        keep = [b.index for b in symbol.basis if crossing_weight(b.multidegree, target.crossing) < 0]
        return self._restrict(symbol, keep, target, route="regrade")

    def regraded_full(self, full: GradedLieSuperalgebra, parabolic: ParabolicId) -> GradedLieSuperalgebra:
        """Full algebra with degrees given by the crossing set."""
        if parabolic in self._regraded and self._regraded[parabolic].table is full.table:
            return self._regraded[parabolic]
        basis = [b.regraded(b.index, crossing_weight(b.multidegree, parabolic.crossing)) for b in full.basis]
        metadata = dict(full.metadata)
        metadata["crossing"] = list(parabolic.crossing)
        algebra = GradedLieSuperalgebra(basis=basis, table=full.table, metadata=metadata)
        self._regraded[parabolic] = algebra
        return algebra

    def graded_parts(self, full: GradedLieSuperalgebra, parabolic: ParabolicId) -> Dict[int, List[int]]:
        """Basis indices of every graded piece g_k."""
        regraded = self.regraded_full(full, parabolic)
        return {degree: regraded.indices_of_degree(degree) for degree in regraded.degrees()}

    def grading_element(self, full: GradedLieSuperalgebra, parabolic: ParabolicId) -> SparseVector:
        """Cartan element acting on every root vector by its degree."""
        diagram = parabolic.diagram
        cartan = root_system.cartan_matrix(diagram)
        rank = diagram.rank
        system = ExactMatrix.from_rows([[cartan[k][j] for k in range(rank)] for j in range(rank)])
        rhs = [1 if j + 1 in parabolic.crossing else 0 for j in range(rank)]
        solution = solve(system, rhs)
        if not solution:
            raise StructureConstantError(f"No grading element for {parabolic}")
        h_offset = full.index_of("h1")
        return {h_offset + k: c for k, c in enumerate(solution) if c}

    @staticmethod
    def even_first(algebra: GradedLieSuperalgebra, degree: int) -> List[int]:
        return sorted(algebra.indices_of_degree(degree), key=lambda i: (int(algebra.basis[i].parity), i))

    def levi_action(self, full: GradedLieSuperalgebra, parabolic: ParabolicId) -> List[GradedMap]:
        """Action of every degree-0 basis element on g_-1 (even-first coordinates)."""
        regraded = self.regraded_full(full, parabolic)
        minus_one = self.even_first(regraded, -1)
        position = {index: n for n, index in enumerate(minus_one)}
        shape = SuperDim.count(regraded.basis[i].parity for i in minus_one)
        maps = []
        for x in self.even_first(regraded, 0):
            images = []
            for v in minus_one:
                images.append({position[k]: c for k, c in regraded.bracket_basis(x, v).items()})
            maps.append(GradedMap.from_images(shape, shape, images, label=regraded.basis[x].label))
        return maps

    def reduction_spec(self, full: GradedLieSuperalgebra, parabolic: ParabolicId, name: str = "") -> ReductionSpec:
        regraded = self.regraded_full(full, parabolic)
        labels = tuple(regraded.basis[i].label for i in self.even_first(regraded, -1))
        return ReductionSpec(maps=self.levi_action(full, parabolic), basis_labels=labels, name=name or "g0")

    def is_fundamental(self, symbol: GradedLieSuperalgebra) -> bool:
        """True when iterated brackets of g_-1 span the whole symbol algebra."""
        minus_one = symbol.indices_of_degree(-1)
        span = EchelonBasis()
        frontier = []
        for i in minus_one:
            span.add({i: Fraction(1)})
            frontier.append({i: Fraction(1)})
        while frontier:
            grown = []
            for vector in frontier:
                for i in minus_one:
                    value = symbol.bracket({i: Fraction(1)}, vector)
                    if value and span.add(value):
                        grown.append(value)
            frontier = grown
        return len(span) == symbol.dim

    def cross_check_symbol(
        self,
        full: GradedLieSuperalgebra,
        symbol: GradedLieSuperalgebra,
        parabolic: ParabolicId,
    ) -> CrossCheckReport:
        """Compare two constructions of m: graded dimensions, bracket ranks, then every constant by label."""
        regraded = self.regraded_full(full, parabolic)
        expected = {d: sd for d, sd in regraded.graded_dims().items() if d < 0}
        actual = symbol.graded_dims()
        if expected != actual:
            return CrossCheckReport(
                success=False,
                error_message=f"Graded dimensions differ: {actual} vs {expected}",
            )
        degrees = sorted(actual)
        checked = 0
        for n, first in enumerate(degrees):
            for second in degrees[n:]:
                if first + second not in actual:
                    continue
                checked += 1
                if symbol.bracket_rank(first, second) != regraded.bracket_rank(first, second):
                    return CrossCheckReport(
                        success=False,
                        degree_pair=(first, second),
                        pairs_checked=checked,
                        error_message=f"Bracket rank differs on degrees ({first}, {second})",
                    )

        position = {b.label: b.index for b in regraded.basis}
        missing = [b.label for b in symbol.basis if b.label not in position]
        if missing:
            return CrossCheckReport(success=False, error_message=f"Basis elements {missing} are not root vectors")
        for i, a in enumerate(symbol.basis):
            for b in symbol.basis[i:]:
                own = {symbol.basis[k].label: c for k, c in symbol.bracket_basis(a.index, b.index).items()}
                value = regraded.bracket_basis(position[a.label], position[b.label])
                other = {regraded.basis[k].label: c for k, c in value.items()}
                if own != other:
                    return CrossCheckReport(
                        success=False,
                        degree_pair=(a.degree, b.degree),
                        pairs_checked=checked,
                        error_message=f"Structure constant differs on [{a.label}, {b.label}]",
                    )
        return CrossCheckReport(success=True, pairs_checked=checked)


algebra_builder = AlgebraBuilder()

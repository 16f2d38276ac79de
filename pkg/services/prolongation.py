"""Tanaka-Weisfeiler prolongation of graded nilpotent symbol algebras.

Level k >= 0 lives inside Hom(g_-1, g_{k-1}): an element is fixed by its
brackets with g_-1, and those brackets must extend to a derivation of the
symbol algebra m. Every deeper basis vector of m is presented once as a
combination of brackets [w, u] with w in g_-1; the extension follows that
presentation and the Leibniz rule is then imposed on every pair (w, u) with
u in m. The solutions of the resulting linear system span g_k.
"""

from __future__ import annotations
import time
from fractions import Fraction
from typing import Dict, Iterator, List, Mapping, Optional, Tuple

import structlog

from config import settings
from models.prolongation import ProlongationResult, ProlongationState, ProlongationStatus, ReductionSpec
from models.superalgebra import BasisElement, GradedLieSuperalgebra, GradedMap, Parity, StructureTable, SuperDim
from utils.linalg import EchelonBasis, SparseVector, add_scaled, nullspace_of_rows


logger = structlog.get_logger()

# basis index -> coefficients over the unknowns of one level
Symbolic = Dict[int, SparseVector]


class ProlongationError(Exception):
    """Raised when a prolongation cannot proceed consistently."""
    pass


class ReductionError(Exception):
    """Raised when a prescribed degree-0 part is not a closed algebra of derivations."""
    pass


def _sym_add(target: Symbolic, source: Mapping[int, SparseVector], coef) -> Symbolic:
    if not coef:
        return target
    for index, coeffs in source.items():
        slot = target.setdefault(index, {})
        add_scaled(slot, coeffs, coef)
        if not slot:
            del target[index]
    return target


def _bracket_right(table: StructureTable, x: Symbolic, u: int) -> Symbolic:
    """[x, b_u] for symbolic x."""
    result: Symbolic = {}
    for t, coeffs in x.items():
        for k, c in table.get(t, u).items():
            _sym_add(result, {k: coeffs}, c)
    return result


def _bracket_left(table: StructureTable, w: int, x: Symbolic) -> Symbolic:
    """[b_w, x] for symbolic x."""
    result: Symbolic = {}
    for t, coeffs in x.items():
        for k, c in table.get(w, t).items():
            _sym_add(result, {k: coeffs}, c)
    return result


def _evaluate(x: Symbolic, values: Mapping[int, Fraction]) -> SparseVector:
    result: SparseVector = {}
    for index, coeffs in x.items():
        total = sum((c * values[u] for u, c in coeffs.items() if u in values), Fraction(0))
        if total:
            result[index] = total
    return result


def _bracket_vectors(table: StructureTable, x: Mapping[int, Fraction], y: Mapping[int, Fraction]) -> SparseVector:
    result: SparseVector = {}
    for i, a in x.items():
        for j, b in y.items():
            value = table.get(i, j)
            if value:
                add_scaled(result, value, a * b)
    return result


def even_first_minus_one(symbol: GradedLieSuperalgebra) -> List[int]:
    return sorted(symbol.indices_of_degree(-1), key=lambda i: (int(symbol.basis[i].parity), i))


class ProlongationService:
    """Computes pr(m) and pr(m, g0) level by level in exact arithmetic."""

    def _present(self, state: ProlongationState):
        """Record v = sum c [w, u] with w in g_-1 for every basis vector of degree <= -2."""
        symbol = state.symbol
        for t in range(2, state.depth + 1):
            span = EchelonBasis(track=True)
            pairs: List[Tuple[int, int]] = []
            for w in state.minus_one:
                for u in symbol.indices_of_degree(-t + 1):
                    value = symbol.bracket_basis(w, u)
                    if value and span.add(value):
                        pairs.append((w, u))
            for v in symbol.indices_of_degree(-t):
                combo = span.coordinates({v: Fraction(1)})
                if combo is None:
                    raise ProlongationError(
                        f"Symbol algebra is not generated by degree -1: {symbol.basis[v].label} is missing"
                    )
                state.presentations[v] = [(c, pairs[n][0], pairs[n][1]) for n, c in sorted(combo.items())]

    def leibniz_extend(
        self,
        state: ProlongationState,
        images: Mapping[int, Symbolic],
        parity: Parity,
    ) -> Tuple[Dict[int, Symbolic], List[SparseVector]]:
        """Extend values on g_-1 to all of m and collect the Leibniz constraints.

        Args:
            state: Prolongation state holding the symbol and the current table
            images: Symbolic value on every element of g_-1
            parity: Parity of the map being extended

        Returns:
            The extension on every basis vector of m and the nonzero constraint rows
        """
        table = state.table
        symbol = state.symbol
        ext: Dict[int, Symbolic] = {w: dict(images.get(w, {})) for w in state.minus_one}
        for t in range(2, state.depth + 1):
            for v in symbol.indices_of_degree(-t):
                value: Symbolic = {}
                for coef, w, u in state.presentations[v]:
                    _sym_add(value, _bracket_right(table, ext[w], u), coef)
                    _sym_add(value, _bracket_left(table, w, ext[u]), coef * parity.sign(symbol.basis[w].parity))
                ext[v] = value

        rows: List[SparseVector] = []
        for w in state.minus_one:
            sign = parity.sign(symbol.basis[w].parity)
            for u in range(symbol.dim):
                residual: Symbolic = {}
                for x, c in symbol.bracket_basis(w, u).items():
                    _sym_add(residual, ext[x], c)
                _sym_add(residual, _bracket_right(table, ext[w], u), -1)
                _sym_add(residual, _bracket_left(table, w, ext[u]), -sign)
                rows.extend(residual.values())
        return ext, rows

    def _level_solutions(
        self,
        state: ProlongationState,
        k: int,
    ) -> Iterator[Tuple[Parity, List[Tuple[int, int]], Dict[int, Symbolic], SparseVector]]:
        """Nullspace vectors of the level-k system, even system first."""
        targets = state.indices_of_degree(k - 1)
        for parity in (Parity.EVEN, Parity.ODD):
            unknowns = [
                (r, t)
                for r, w in enumerate(state.minus_one)
                for t in targets
                if state.basis[t].parity == state.basis[w].parity + parity
            ]
            if not unknowns:
                continue
            images: Dict[int, Symbolic] = {w: {} for w in state.minus_one}
            for u, (r, t) in enumerate(unknowns):
                images[state.minus_one[r]][t] = {u: Fraction(1)}
            ext, rows = self.leibniz_extend(state, images, parity)
            logger.debug(
                "Level system assembled",
                level=k,
                parity=int(parity),
                unknowns=len(unknowns),
                rows=len(rows),
            )
            for solution in nullspace_of_rows(rows, len(unknowns)):
                yield parity, unknowns, ext, solution

    def prolong_step(self, state: ProlongationState, k: int) -> List[int]:
        """Compute g_k with its brackets into m; returns the new basis indices."""
        n = len(state.minus_one)
        found = list(self._level_solutions(state, k))
        new: List[int] = []
        for parity, unknowns, ext, solution in found:
            index = state.add_element(
                BasisElement(index=0, parity=parity, degree=k, label=f"g{k}.{len(new)}")
            )
            for v in range(state.symbol.dim):
                state.table.set_bracket(index, v, _evaluate(ext[v], solution))
            state.restrictions[index] = {
                unknowns[u][1] * n + unknowns[u][0]: c for u, c in solution.items()
            }
            new.append(index)
        if new:
            state.levels[k] = new
        return new

    def nonneg_brackets(self, state: ProlongationState, i: int, j: int):
        """Fill [g_i, g_j] by decomposing [[a, b], w] over the restrictions of g_(i+j)."""
        table = state.table
        level = state.levels.get(i + j, [])
        n = len(state.minus_one)
        basis = EchelonBasis(track=True)
        for e in level:
            if not basis.add(state.restrictions[e]):
                raise ProlongationError(f"Level {i + j} element {state.basis[e].label} is not transitive")

        for a in state.levels.get(i, []):
            for b in state.levels.get(j, []):
                if i == j and b < a:
                    continue
                if a == b and not state.basis[a].parity:
                    continue
                sign = state.basis[a].parity.sign(state.basis[b].parity)
                restriction: SparseVector = {}
                for r, w in enumerate(state.minus_one):
                    value = _bracket_vectors(table, {a: Fraction(1)}, table.get(b, w))
                    add_scaled(value, _bracket_vectors(table, {b: Fraction(1)}, table.get(a, w)), Fraction(-sign))
                    for t, c in value.items():
                        restriction[t * n + r] = c
                combo = basis.coordinates(restriction)
                if combo is None:
                    raise ProlongationError(
                        f"[{state.basis[a].label}, {state.basis[b].label}] does not decompose over level {i + j}"
                    )
                table.set_bracket(a, b, {level[m]: c for m, c in combo.items()})

    def _close_level(self, state: ProlongationState, k: int):
        for i in range(0, k // 2 + 1):
            self.nonneg_brackets(state, i, k - i)

    def _install_reduction(self, state: ProlongationState, reduction: ReductionSpec):
        """Level 0 taken from prescribed maps on g_-1."""
        symbol = state.symbol
        by_label = {symbol.basis[w].label: w for w in state.minus_one}
        if sorted(reduction.basis_labels) != sorted(by_label):
            raise ReductionError(
                f"Reduction {reduction.name} acts on {list(reduction.basis_labels)}, "
                f"symbol has g_-1 = {sorted(by_label)}"
            )
        defect = reduction.closure_defect()
        if defect is not None:
            first, second = defect
            raise ReductionError(
                f"Reduction {reduction.name} is not closed: "
                f"[{reduction.maps[first].label}, {reduction.maps[second].label}] leaves the span"
            )

        coordinate = [by_label[label] for label in reduction.basis_labels]
        position = {w: r for r, w in enumerate(state.minus_one)}
        n = len(state.minus_one)
        chosen = EchelonBasis()
        used = set()
        level: List[int] = []
        for number, item in enumerate(reduction.maps):
            for part, parity in zip(item.parity_split(), (Parity.EVEN, Parity.ODD)):
                if part.matrix.is_zero():
                    continue
                images: Dict[int, Symbolic] = {w: {} for w in state.minus_one}
                restriction: SparseVector = {}
                for (row, col), value in part.matrix.items():
                    source, target = coordinate[col], coordinate[row]
                    images[source][target] = {0: value}
                    restriction[target * n + position[source]] = value
                if not chosen.add(restriction):
                    continue
                ext, rows = self.leibniz_extend(state, images, parity)
                if rows:
                    raise ReductionError(f"Map {item.label or number} of {reduction.name} is not a derivation of m")
                label = item.label or f"{reduction.name}.{number}"
                while label in used:
                    label += "'"
                used.add(label)
                index = state.add_element(BasisElement(index=0, parity=parity, degree=0, label=label))
                for v in range(symbol.dim):
                    state.table.set_bracket(index, v, _evaluate(ext[v], {0: Fraction(1)}))
                state.restrictions[index] = restriction
                level.append(index)

        identity = {w * n + r: Fraction(1) for r, w in enumerate(state.minus_one)}
        if not chosen.contains(identity):
            raise ReductionError(f"Reduction {reduction.name} does not contain the grading element")
        state.levels[0] = level

    def der0(self, symbol: GradedLieSuperalgebra) -> List[GradedMap]:
        """Degree-0 derivations of m as maps on g_-1 (even-first coordinates)."""
        state = ProlongationState.start(symbol, even_first_minus_one(symbol))
        self._present(state)
        position = {w: r for r, w in enumerate(state.minus_one)}
        shape = SuperDim.count(symbol.basis[w].parity for w in state.minus_one)
        maps: List[GradedMap] = []
        for parity, unknowns, _, solution in self._level_solutions(state, 0):
            images: List[SparseVector] = [dict() for _ in state.minus_one]
            for u, c in solution.items():
                r, t = unknowns[u]
                images[r][position[t]] = c
            maps.append(GradedMap.from_images(shape, shape, images, label=f"der0.{len(maps)}"))
        logger.info("Degree-0 derivations computed", dim=str(SuperDim.count(m.parity for m in maps)))
        return maps

    def prolong(
        self,
        symbol: GradedLieSuperalgebra,
        reduction: Optional[ReductionSpec] = None,
        threshold: Optional[int] = None,
    ) -> ProlongationResult:
        """Run the prolongation until a level vanishes or a limit is hit.

        Args:
            symbol: Fundamental negatively graded symbol algebra
            reduction: Prescribed degree-0 part; iteration then starts at level 1
            threshold: Last level to compute; defaults to depth + threshold_margin

        Returns:
            ProlongationResult with the assembled algebra and the stop status
        """
        start_time = time.time()
        depth = -min(symbol.degrees())
        if threshold is None:
            threshold = depth + settings.threshold_margin
        if threshold < depth + 1:
            raise ProlongationError(f"Threshold {threshold} is below depth + 1 = {depth + 1}")

        state = ProlongationState.start(symbol, even_first_minus_one(symbol))
        self._present(state)
        n = len(state.minus_one)
        cap = settings.max_level_unknowns

        k = 0
        if reduction is not None:
            self._install_reduction(state, reduction)
            try:
                self._close_level(state, 0)
            except ProlongationError as e:
                raise ReductionError(f"Reduction {reduction.name}: {e}")
            k = 1

        status = ProlongationStatus.THRESHOLD_EXCEEDED
        width = n * len(state.indices_of_degree(k - 1))
        reason = f"level {k} needs {width} unknowns" if width > cap else ""
        while not reason:
            new = self.prolong_step(state, k)
            logger.info(
                "Prolongation level computed",
                level=k,
                dims=str(SuperDim.count(state.basis[i].parity for i in new)),
            )
            if not new:
                self._close_level(state, k)
                status = ProlongationStatus.FINITE
                reason = f"g{k} = 0"
                break
            if k >= threshold:
                reason = f"threshold {threshold} reached with g{k} != 0"
                break
            width = n * len(new)
            if width > cap:
                reason = f"level {k + 1} needs {width} unknowns, cap is {cap}"
                break
            self._close_level(state, k)
            k += 1

        state.status = status
        algebra = state.algebra()
        jacobi = None
        if status is ProlongationStatus.FINITE:
            jacobi = algebra.check_jacobi()
            if not jacobi.success:
                logger.error("Prolongation output fails Jacobi", error=jacobi.error_message)

        result = ProlongationResult(
            algebra=algebra,
            status=status,
            level_dims=state.level_dims(),
            jacobi=jacobi,
            stop_reason=reason,
            processing_time=time.time() - start_time,
        )
        logger.info("Prolongation finished", status=status.value, dim=str(algebra.superdim), reason=reason)
        return result


prolongation_service = ProlongationService()

"""Polynomial super vector fields: brackets, contact fields and closure checks.

The contact geometry lives on C^{1|7} with coordinates (u | xi1..xi7) and
contact form du - xi1 dxi4 - xi2 dxi5 - xi3 dxi6 - xi7 dxi7. Generating
functions f give contact fields X_f, and [X_f, X_h] = X_{[f, h]} defines the
Lagrange bracket on functions.
"""

from __future__ import annotations
import re
from fractions import Fraction
from itertools import combinations
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import structlog

from models.reports import ClosureReport, FieldCheckReport
from models.superalgebra import (
    BasisElement,
    GradedLieSuperalgebra,
    GradedMap,
    Parity,
    StructureTable,
    SuperDim,
    closure_defect,
    derived_span_dims,
    span_dims,
)
from repositories.field_repository import FieldFixture, FieldRepository
from services.prolongation import prolongation_service
from utils.field_parser import FieldParseError
from utils.linalg import EchelonBasis, ExactMatrix, SparseVector, nullspace_of_rows
from utils.superpoly import CoordinateMismatchError, CoordinateSystem, SuperPolynomial, SuperVectorField, TermIndex


logger = structlog.get_logger()

CONTACT_COORDINATES = CoordinateSystem(even=("u",), odd=tuple(f"xi{k}" for k in range(1, 8)))

# hatted derivative D_j = d/dxi_j - xi_pair(j) d/du
CONTACT_PAIRS = {"xi4": "xi1", "xi5": "xi2", "xi6": "xi3", "xi7": "xi7"}

# cubic on g_-1 = <d_xi1, d_xi2, d_xi3, D_xi4, D_xi5, D_xi6, D_xi7>, 1-based positions
CUBIC_TERMS = {(1, 4, 7): 1, (2, 5, 7): 1, (3, 6, 7): 1, (1, 2, 3): -1, (4, 5, 6): 1}

# even-part parameters of the degree-0 supermatrix on (x1..x6 | xi1..xi4)
_MATRIX_ROWS = (
    ("2a2", "0", "0", "0", "0", "0", "b8", "b7", "b5", "b6"),
    ("0", "0", "a9", "2a6", "a4", "2a11", "b1", "b2", "b4", "b3"),
    ("0", "2a6", "a1+a3", "0", "-a7", "-2a5", "2b3", "2b4", "0", "0"),
    ("0", "a9", "0", "-a1-a3", "a8", "a10", "0", "0", "b2", "b1"),
    ("0", "2a11", "-a10", "2a5", "a1-a3", "0", "2b2", "0", "0", "-2b4"),
    ("0", "a4", "-a8", "a7", "0", "a3-a1", "0", "b1", "-b3", "0"),
    ("3b4", "-b5", "-b7", "0", "b6", "0", "a1+a2", "a11", "a5", "a6"),
    ("-3b3", "b6", "b8", "0", "0", "-2b5", "a4", "a2+a3", "a6", "a7"),
    ("-3b1", "b8", "0", "2b6", "0", "2b7", "2a8", "a9", "a2-a1", "-a4"),
    ("3b2", "-b7", "0", "-2b5", "-b8", "0", "a9", "a10", "-a11", "a2-a3"),
)
_ENTRY_TERM = re.compile(r"([+-]?)(\d*)([ab]\d+)")


class LagrangeBracketError(Exception):
    """Raised when the bracket of two contact fields is not a contact field."""
    pass


def super_bracket(x: SuperVectorField, y: SuperVectorField) -> SuperVectorField:
    """[X, Y] = X o Y - (-1)^(|X||Y|) Y o X."""
    if x.system != y.system:
        raise CoordinateMismatchError("Cannot bracket fields on different coordinate systems")
    return x.bracket(y)


def hatted(name: str, coefficient: Optional[SuperPolynomial] = None) -> SuperVectorField:
    """coefficient * (d/dxi_j - xi_pair(j) d/du)."""
    system = CONTACT_COORDINATES
    g = coefficient if coefficient is not None else SuperPolynomial.constant(system, 1)
    pair = SuperPolynomial.variable(system, CONTACT_PAIRS[name])
    return SuperVectorField(system, {name: g, "u": -(g * pair)})


def hatted_derivative(name: str, f: SuperPolynomial) -> SuperPolynomial:
    return hatted(name).apply(f)


def _contact_homogeneous(f: SuperPolynomial) -> SuperVectorField:
    system = CONTACT_COORDINATES
    half = Fraction(1, 2)
    inner = SuperVectorField.zero(system)
    for low, high in (("xi1", "xi4"), ("xi2", "xi5"), ("xi3", "xi6")):
        inner = inner + SuperVectorField(system, {low: hatted_derivative(high, f)})
        inner = inner + hatted(high, f.derivative(low))
    inner = inner + hatted("xi7", hatted_derivative("xi7", f).scale(half))
    sign = -1 if f.parity else 1
    return SuperVectorField(system, {"u": f}) - inner.scale(sign)


def contact_field(f: SuperPolynomial) -> SuperVectorField:
    """Contact vector field X_f of a generating function."""
    if f.system != CONTACT_COORDINATES:
        raise CoordinateMismatchError("Generating functions live on (u | xi1..xi7)")
    even, odd = f.parity_parts()
    result = SuperVectorField.zero(CONTACT_COORDINATES)
    for part in (even, odd):
        if part:
            result = result + _contact_homogeneous(part)
    return result


def generating_function(field: SuperVectorField) -> SuperPolynomial:
    """f = omega(X) = X^u + X^xi4 xi1 + X^xi5 xi2 + X^xi6 xi3 + X^xi7 xi7."""
    system = CONTACT_COORDINATES
    result = field.component("u")
    for name, pair in CONTACT_PAIRS.items():
        result = result + field.component(name) * SuperPolynomial.variable(system, pair)
    return result


def contact_frame() -> List[Tuple[str, SuperVectorField]]:
    """Fields spanning the contact distribution ker(omega)."""
    system = CONTACT_COORDINATES
    frame = [(f"d_xi{k}", SuperVectorField.partial(system, f"xi{k}")) for k in (1, 2, 3)]
    frame += [(f"D_{name}", hatted(name)) for name in CONTACT_PAIRS]
    return frame


def contact_defect(field: SuperVectorField) -> Optional[str]:
    """First distribution field D with omega([X, D]) != 0, None when L_X omega is a multiple of omega."""
    for label, d in contact_frame():
        residue = generating_function(super_bracket(field, d))
        if residue:
            return f"omega([X, {label}]) = {residue}"
    return None


def lagrange_bracket(f: SuperPolynomial, h: SuperPolynomial) -> SuperPolynomial:
    """Generating function of [X_f, X_h]."""
    bracket = super_bracket(contact_field(f), contact_field(h))
    g = generating_function(bracket)
    if contact_field(g) != bracket:
        raise LagrangeBracketError(f"[X_f, X_h] is not a contact field for f = {f}, h = {h}")
    return g


def grading_decomposition(fields: Sequence[SuperVectorField], euler: SuperVectorField) -> List[Optional[Fraction]]:
    """Eigenvalue of ad(euler) on every field, None when it is not an eigenvector."""
    result: List[Optional[Fraction]] = []
    for field in fields:
        image = super_bracket(euler, field)
        if not image:
            result.append(Fraction(0))
            continue
        index = TermIndex()
        source = index.field_vector(field)
        target = index.field_vector(image)
        key = min(source)
        ratio = target.get(key, Fraction(0)) / source[key]
        result.append(ratio if {k: v * ratio for k, v in source.items()} == target else None)
    return result


def _close(
    elements: Sequence,
    bracket: Callable,
    vectorize: Callable[[object], SparseVector],
    parities: Sequence[Parity],
    labels: Sequence[str],
    degrees: Sequence[int],
) -> ClosureReport:
    span = EchelonBasis(track=True)
    for n, element in enumerate(elements):
        if not span.add(vectorize(element)):
            return ClosureReport(success=False, error_message=f"{labels[n]} is linearly dependent on the previous elements")

    table = StructureTable(parities)
    for i in range(len(elements)):
        for j in range(i, len(elements)):
            if i == j and not parities[i]:
                continue
            value = vectorize(bracket(elements[i], elements[j]))
            combo = span.coordinates(value)
            if combo is None:
                remainder, _ = span.reduce(value)
                return ClosureReport(
                    success=False,
                    offending_pair=(i, j),
                    residual=remainder,
                    error_message=f"[{labels[i]}, {labels[j]}] leaves the span",
                )
            table.set_bracket(i, j, combo)

    basis = [BasisElement(n, parities[n], degrees[n], labels[n]) for n in range(len(elements))]
    algebra = GradedLieSuperalgebra(basis=basis, table=table, metadata={"route": "closure"})
    jacobi = algebra.check_jacobi()
    return ClosureReport(
        success=jacobi.success,
        algebra=algebra,
        jacobi=jacobi,
        error_message=jacobi.error_message,
    )


def closure_check(
    fields: Sequence[SuperVectorField],
    labels: Optional[Sequence[str]] = None,
    degrees: Optional[Sequence[int]] = None,
) -> ClosureReport:
    """Close a list of homogeneous fields under the super bracket."""
    labels = list(labels) if labels is not None else [f"X{n}" for n in range(len(fields))]
    degrees = list(degrees) if degrees is not None else [0] * len(fields)
    parities = []
    for label, field in zip(labels, fields):
        if field.parity is None:
            return ClosureReport(success=False, error_message=f"{label} is zero or of mixed parity")
        parities.append(field.parity)
    index = TermIndex()
    report = _close(fields, super_bracket, index.field_vector, parities, labels, degrees)
    logger.info("Field closure checked", fields=len(fields), success=report.success, dims=str(report.dims))
    return report


def function_weight(f: SuperPolynomial) -> Optional[int]:
    """Degree of X_f in the contact grading: weight(u) = 2, weight(xi) = 1, shifted by -2."""
    weights = {"u": 2, **{name: 1 for name in CONTACT_COORDINATES.odd}}
    value = f.weight(weights)
    return None if value is None else value - 2


def lagrange_closure(functions: Sequence[SuperPolynomial], labels: Optional[Sequence[str]] = None) -> ClosureReport:
    """Close generating functions under the Lagrange bracket."""
    labels = list(labels) if labels is not None else [f"f{n}" for n in range(len(functions))]
    parities = []
    degrees = []
    for label, f in zip(labels, functions):
        if f.parity is None:
            return ClosureReport(success=False, error_message=f"{label} is zero or of mixed parity")
        parities.append(f.parity)
        degree = function_weight(f)
        degrees.append(degree if degree is not None else 0)
    index = TermIndex()
    report = _close(functions, lagrange_bracket, index.poly_vector, parities, labels, degrees)
    logger.info("Generating functions closed", functions=len(functions), success=report.success, dims=str(report.dims))
    return report


def fundamental_field_check(fields: Sequence[SuperVectorField], expected: SuperDim) -> Tuple[bool, SuperDim]:
    """Span of the fields at the origin, compared with the expected dimension."""
    even = EchelonBasis()
    odd = EchelonBasis()
    for field in fields:
        vector = field.at_origin()
        system = field.system
        even.add({k: v for k, v in vector.items() if k < len(system.even)})
        odd.add({k: v for k, v in vector.items() if k >= len(system.even)})
    dims = SuperDim(len(even), len(odd))
    return dims == expected, dims


def contact_symbol() -> GradedLieSuperalgebra:
    """heis(1|7) realised by d_xi1, d_xi2, d_xi3, D_xi4..D_xi7 and d_u."""
    system = CONTACT_COORDINATES
    fields = [SuperVectorField.partial(system, f"xi{k}") for k in (1, 2, 3)]
    fields += [hatted(f"xi{k}") for k in (4, 5, 6, 7)]
    fields.append(SuperVectorField.partial(system, "u"))
    labels = ["d_xi1", "d_xi2", "d_xi3", "D_xi4", "D_xi5", "D_xi6", "D_xi7", "d_u"]
    report = closure_check(fields, labels=labels, degrees=[-1] * 7 + [-2])
    if not report.success:
        raise LagrangeBracketError(f"Contact symbol does not close: {report.error_message}")
    report.algebra.metadata["route"] = "contact"
    return report.algebra


def _cubic_value(a: int, b: int, c: int) -> int:
    """Alternating extension of CUBIC_TERMS to 0-based index triples."""
    triple = (a + 1, b + 1, c + 1)
    if len(set(triple)) < 3:
        return 0
    ordered = tuple(sorted(triple))
    value = CUBIC_TERMS.get(ordered, 0)
    inversions = sum(1 for p in range(3) for r in range(p + 1, 3) if triple[p] > triple[r])
    return -value if inversions % 2 else value


def cubic_action(a: GradedMap) -> Dict[Tuple[int, int, int], Fraction]:
    """(A.q)_abc = -sum_d (A_da q_dbc + A_db q_adc + A_dc q_abd) for a < b < c."""
    size = a.source.total
    result = {}
    for i, j, k in combinations(range(size), 3):
        total = Fraction(0)
        for d in range(size):
            total -= a.matrix[d, i] * _cubic_value(d, j, k)
            total -= a.matrix[d, j] * _cubic_value(i, d, k)
            total -= a.matrix[d, k] * _cubic_value(i, j, d)
        if total:
            result[(i, j, k)] = total
    return result


def cubic_annihilator(der0: Optional[Sequence[GradedMap]] = None) -> List[GradedMap]:
    """Degree-0 derivations of heis(1|7) preserving the cubic up to scale."""
    if der0 is None:
        der0 = prolongation_service.der0(contact_symbol())
    triples = list(combinations(range(der0[0].source.total), 3))
    position = {t: n for n, t in enumerate(triples)}
    unknowns = len(der0) + 1
    rows: List[SparseVector] = [dict() for _ in triples]
    for n, item in enumerate(der0):
        for triple, value in cubic_action(item).items():
            rows[position[triple]][n] = value
    for triple in triples:
        value = _cubic_value(*triple)
        if value:
            rows[position[triple]][len(der0)] = Fraction(-value)

    maps = []
    for solution in nullspace_of_rows(rows, unknowns):
        total = GradedMap.zero(der0[0].source, der0[0].target)
        for n, coef in solution.items():
            if n < len(der0):
                total = total + der0[n].scale(coef)
        if not total.matrix.is_zero():
            maps.append(GradedMap(total.source, total.target, total.matrix, label=f"ann.{len(maps)}"))
    logger.info("Cubic annihilator computed", dim=str(span_dims(maps)), derived=str(derived_span_dims(maps)))
    return maps


def _parse_entry(entry: str) -> Dict[str, int]:
    terms: Dict[str, int] = {}
    if entry == "0":
        return terms
    for sign, digits, name in _ENTRY_TERM.findall(entry):
        terms[name] = terms.get(name, 0) + (-1 if sign == "-" else 1) * int(digits or 1)
    return terms


def matrix_algebra() -> List[GradedMap]:
    """Basis supermatrices of the degree-0 algebra acting on (6|4), including the scalar line."""
    names = [f"a{k}" for k in range(1, 12)] + [f"b{k}" for k in range(1, 9)]
    entries: Dict[str, Dict[Tuple[int, int], int]] = {name: {} for name in names}
    for i, row in enumerate(_MATRIX_ROWS):
        for j, entry in enumerate(row):
            for name, coef in _parse_entry(entry).items():
                entries[name][(i, j)] = coef
    shape = SuperDim(6, 4)
    maps = [GradedMap(shape, shape, ExactMatrix(10, 10, entries[name]), label=name) for name in names]
    maps.append(GradedMap(shape, shape, ExactMatrix.identity(10), label="a12"))
    return maps


class SuperfieldService:
    """Runs the realisation checks on the field fixtures."""

    def __init__(self, repository: Optional[FieldRepository] = None):
        self.repository = repository or FieldRepository()

    async def _fixture(self, key: str) -> FieldFixture:
        if not await self.repository.exists(key):
            raise FieldParseError(f"Unknown fixture {key}; known: {', '.join(self.repository.keys())}")
        fixture = await self.repository.get_by_id(key)
        if fixture is None:
            raise FieldParseError(f"Fixture {key} not found under {self.repository.data_dir}")
        return fixture

    async def check_realisation(self, key: str = "f4_fields") -> FieldCheckReport:
        """Closure, grading and degree-0 checks of a graded vector-field realisation."""
        fixture = await self._fixture(key)
        entries = fixture.fields()
        labels = [label for label, _, _ in entries]
        fields = [item for _, item, _ in entries]
        degrees = [degree for _, _, degree in entries]
        report = FieldCheckReport(name=key)

        report.closure = closure_check(fields, labels=labels, degrees=degrees)
        if not report.closure.success:
            report.messages.append(report.closure.error_message)

        euler = fields[labels.index(fixture.header["euler"])]
        eigenvalues = grading_decomposition(fields, euler)
        mismatched = [labels[n] for n, value in enumerate(eigenvalues) if value != degrees[n]]
        report.checks["grading"] = not mismatched
        if mismatched:
            report.messages.append(f"Grading eigenvalues differ on {', '.join(mismatched)}")

        minus_one = [item for item, degree in zip(fields, degrees) if degree < 0]
        expected = SuperDim.count(item.parity for item in minus_one)
        report.checks["fundamental"], report.origin_span = fundamental_field_check(fields, expected)

        degree_zero = SuperDim.count(item.parity for item, degree in zip(fields, degrees) if degree == 0)
        matrices = matrix_algebra()
        report.checks["matrix_closure"] = closure_defect(matrices) is None
        report.checks["degree_zero"] = span_dims(matrices) == degree_zero
        logger.info("Realisation checked", fixture=key, success=report.success, checks=report.checks)
        return report

    async def check_contact(self, key: str = "contact_functions") -> FieldCheckReport:
        """Lagrange closure of the generating functions, with the cubic reduction of der0."""
        fixture = await self._fixture(key)
        entries = fixture.functions()
        labels = [label for label, _, _ in entries]
        functions = [f for _, f, _ in entries]
        report = FieldCheckReport(name=key)

        try:
            report.closure = lagrange_closure(functions, labels=labels)
            report.checks["homomorphism"] = True
        except LagrangeBracketError as e:
            logger.error("Lagrange bracket failed", fixture=key, error=str(e))
            report.checks["homomorphism"] = False
            report.messages.append(str(e))
            return report
        if not report.closure.success:
            report.messages.append(report.closure.error_message)

        fields = [contact_field(f) for f in functions]
        report.checks["injective"] = all(fields)
        defects = [(label, contact_defect(item)) for label, item in zip(labels, fields)]
        defects = [(label, defect) for label, defect in defects if defect is not None]
        report.checks["contact_preserving"] = not defects
        for label, defect in defects:
            report.messages.append(f"X_{label} does not preserve the contact form: {defect}")
        report.checks["fundamental"], report.origin_span = fundamental_field_check(fields, SuperDim(1, 7))

        annihilator = cubic_annihilator()
        report.checks["cubic_annihilator"] = span_dims(annihilator) == SuperDim(15, 0)
        report.checks["cubic_derived"] = derived_span_dims(annihilator) == SuperDim(14, 0)
        logger.info("Contact realisation checked", fixture=key, success=report.success, checks=report.checks)
        return report


superfield_service = SuperfieldService()

from fractions import Fraction
from itertools import combinations

import pytest

from models.roots import DiagramId, InvalidDiagramError, ParabolicId
from models.superalgebra import GradedLieSuperalgebra, Parity, SuperDim, span_dims
from services.algebra_builder import AlgebraBuilder, algebra_builder, crossing_weight, parabolic_of
from services.root_system import root_system
from tests.conftest import F4, G3, parabolic, symbol_of


ALL_DIAGRAMS = [DiagramId(algebra, xi) for algebra in (G3, F4) for xi in algebra.diagrams]


@pytest.mark.parametrize("diagram", ALL_DIAGRAMS, ids=str)
def test_full_algebra_dimensions_and_jacobi(diagram):
    full = algebra_builder.build_full(diagram)
    assert full.superdim == diagram.algebra.total_dim
    assert full.check_grading() is None
    assert full.check_jacobi().success
    assert full.metadata["route"] == "contragredient"


def test_full_algebra_is_cached(g3_full):
    assert algebra_builder.build_full(DiagramId.parse("G3", "I")) is g3_full


def test_cartan_acts_on_simple_root_vectors(g3_full):
    diagram = DiagramId.parse("G3", "I")
    cartan = root_system.cartan_matrix(diagram)
    for k in range(diagram.rank):
        h = g3_full.index_of(f"h{k + 1}")
        for i in range(diagram.rank):
            e = g3_full.index_of(f"a{i + 1}")
            value = g3_full.bracket_basis(h, e)
            expected = {e: cartan[k][i]} if cartan[k][i] else {}
            assert value == expected


def test_simple_root_vectors_pair_into_cartan(f4_full):
    cartan_indices = {f4_full.index_of(f"h{k}") for k in range(1, 5)}
    for i in range(1, 5):
        value = f4_full.bracket_basis(f4_full.index_of(f"a{i}"), f4_full.index_of(f"-a{i}"))
        assert value
        assert set(value) <= cartan_indices


def test_principal_grading_and_labels(g3_full):
    degrees = g3_full.graded_dims()
    assert min(degrees) == -8
    assert degrees[0] == SuperDim(3, 0)
    assert g3_full.basis[g3_full.index_of("-2a1-4a2-2a3")].degree == -8


def test_symbol_of_contact_parabolic():
    symbol = symbol_of("G3", "I", "1")
    assert symbol.superdim == SuperDim(1, 7)
    assert symbol.graded_dims() == {-2: SuperDim(1, 0), -1: SuperDim(0, 7)}
    assert parabolic_of(symbol) == parabolic("G3", "I", "1")
    assert symbol.check_jacobi().success


@pytest.mark.parametrize("algebra", [G3, F4], ids=lambda a: a.value)
def test_symbol_dims_match_golden_atlas(algebra, golden_atlas):
    for row in golden_atlas[algebra].rows:
        xi, crossing = row.label.split("_")
        symbol = symbol_of(algebra.value, xi, crossing)
        assert symbol.superdim == row.dim, row.label


@pytest.mark.parametrize("p", root_system.representatives(G3), ids=str)
def test_g3_symbols_are_fundamental_and_agree_with_full(p, g3_full):
    symbol = algebra_builder.build_symbol(p)
    assert algebra_builder.is_fundamental(symbol)
    full = algebra_builder.build_full(p.diagram)
    report = algebra_builder.cross_check_symbol(full, symbol, p)
    assert report.success, report.error_message


@pytest.mark.slow
@pytest.mark.parametrize("p", root_system.representatives(F4), ids=str)
def test_f4_symbols_are_fundamental_and_agree_with_full(p):
    symbol = algebra_builder.build_symbol(p)
    assert algebra_builder.is_fundamental(symbol)
    report = algebra_builder.cross_check_symbol(algebra_builder.build_full(p.diagram), symbol, p)
    assert report.success, report.error_message


def canonical_first_pairs(algebra, members):
    """Constant on the first pair, in (-degree, parity, label) order, bracketing onto each member."""
    order = sorted(members, key=lambda i: (-algebra.basis[i].degree, int(algebra.basis[i].parity), algebra.basis[i].label))
    first = {}
    for n, a in enumerate(order):
        for b in order[n:]:
            for k, c in algebra.bracket_basis(a, b).items():
                if k in members and k not in first:
                    first[k] = c
    return first


@pytest.mark.parametrize("diagram", ALL_DIAGRAMS, ids=str)
def test_borel_nilradical_is_built_from_roots(diagram):
    borel = algebra_builder.build_borel(diagram)
    negative = {r.coeffs for r in root_system.negative_roots(diagram)}
    assert {b.multidegree for b in borel.basis} == negative
    assert borel.metadata["route"] == "borel"
    assert borel.check_jacobi().success
    for n, a in enumerate(borel.basis):
        for b in borel.basis[n:]:
            target = tuple(x + y for x, y in zip(a.multidegree, b.multidegree))
            if target not in negative:
                assert not borel.bracket_basis(a.index, b.index), (a.label, b.label)


def test_symbol_is_built_without_the_full_algebra(monkeypatch):
    builder = AlgebraBuilder()

    def refuse(diagram):
        raise AssertionError(f"full algebra of {diagram} requested")

    monkeypatch.setattr(builder, "build_full", refuse)
    symbol = builder.build_symbol(parabolic("G3", "I", "123"))
    assert symbol.superdim == SuperDim(7, 7)
    assert symbol.check_jacobi().success
    assert builder.is_fundamental(symbol)


@pytest.mark.parametrize("diagram", ALL_DIAGRAMS, ids=str)
def test_first_canonical_pair_onto_each_root_is_one(diagram):
    borel = algebra_builder.build_borel(diagram)
    simple = {b.index for b in borel.basis if b.degree == -1}
    first = canonical_first_pairs(borel, {b.index for b in borel.basis})
    assert set(first) == {b.index for b in borel.basis} - simple
    assert set(first.values()) == {1}

    full = algebra_builder.build_full(diagram)
    for members in ([b.index for b in full.basis if b.degree < 0], [b.index for b in full.basis if b.degree > 0]):
        first = canonical_first_pairs(full, set(members))
        assert len(first) == len(members) - diagram.rank
        assert set(first.values()) == {1}


@pytest.mark.parametrize("diagram", [DiagramId(G3, xi) for xi in G3.diagrams], ids=str)
def test_borel_constants_equal_full_constants_by_label(diagram):
    borel = algebra_builder.build_borel(diagram)
    p = ParabolicId(diagram, tuple(range(1, diagram.rank + 1)))
    report = algebra_builder.cross_check_symbol(algebra_builder.build_full(diagram), borel, p)
    assert report.success, report.error_message


def test_cross_check_rejects_a_missing_bracket(g3_full):
    p = parabolic("G3", "I", "123")
    symbol = algebra_builder.build_symbol(p)
    (i, j), _ = next(
        (key, value) for key, value in symbol.table.entries()
        if symbol.basis[key[0]].degree == symbol.basis[key[1]].degree == -1
    )
    table = symbol.table.copy()
    table.set_bracket(i, j, {})
    corrupted = GradedLieSuperalgebra(basis=symbol.basis, table=table, metadata=dict(symbol.metadata))
    report = algebra_builder.cross_check_symbol(g3_full, corrupted, p)
    assert not report.success
    assert report.degree_pair == (-1, -1)


def test_cross_check_rejects_a_rescaled_constant(g3_full):
    p = parabolic("G3", "I", "123")
    symbol = algebra_builder.build_symbol(p)
    (i, j), value = list(symbol.table.entries())[-1]
    table = symbol.table.copy()
    table.set_bracket(i, j, {k: 2 * c for k, c in value.items()})
    corrupted = GradedLieSuperalgebra(basis=symbol.basis, table=table, metadata=dict(symbol.metadata))
    report = algebra_builder.cross_check_symbol(g3_full, corrupted, p)
    assert not report.success
    assert report.degree_pair == (symbol.basis[i].degree, symbol.basis[j].degree)
    assert "Structure constant differs" in report.error_message


def test_cross_check_rejects_a_corrupted_full_algebra(g3_full):
    p = parabolic("G3", "I", "123")
    symbol = algebra_builder.build_symbol(p)
    simple = [g3_full.index_of(f"-a{k}") for k in (1, 2, 3)]
    a, b = next((x, y) for x in simple for y in simple if x < y and g3_full.bracket_basis(x, y))
    table = g3_full.table.copy()
    table.set_bracket(a, b, {})
    corrupted = GradedLieSuperalgebra(basis=g3_full.basis, table=table, metadata=dict(g3_full.metadata))
    report = algebra_builder.cross_check_symbol(corrupted, symbol, p)
    assert not report.success
    assert report.degree_pair == (-1, -1)
    assert algebra_builder.cross_check_symbol(g3_full, symbol, p).success


def crossing_pairs(algebra):
    """Every (diagram, crossing, sub-crossing) with the sub-crossing nonempty."""
    for xi in algebra.diagrams:
        diagram = DiagramId(algebra, xi)
        nodes = range(1, diagram.rank + 1)
        for size in nodes:
            for crossing in combinations(nodes, size):
                for sub_size in range(1, size + 1):
                    for subset in combinations(crossing, sub_size):
                        yield pytest.param(diagram, crossing, subset, id=f"{diagram}_{''.join(map(str, crossing))}->{''.join(map(str, subset))}")


def assert_regrade_matches_direct(diagram, crossing, subset):
    coarse = algebra_builder.regrade(algebra_builder.build_symbol(ParabolicId(diagram, crossing)), subset)
    direct = algebra_builder.build_symbol(ParabolicId(diagram, subset))
    dims = direct.graded_dims()
    assert coarse.graded_dims() == dims
    degrees = sorted(dims)
    for n, first in enumerate(degrees):
        for second in degrees[n:]:
            assert coarse.bracket_rank(first, second) == direct.bracket_rank(first, second), (first, second)
    assert coarse.basis == direct.basis
    assert list(coarse.table.entries()) == list(direct.table.entries())


@pytest.mark.parametrize("diagram, crossing, subset", list(crossing_pairs(G3)))
def test_g3_regrade_agrees_with_direct_symbol(diagram, crossing, subset):
    assert_regrade_matches_direct(diagram, crossing, subset)


@pytest.mark.slow
@pytest.mark.parametrize("diagram, crossing, subset", list(crossing_pairs(F4)))
def test_f4_regrade_agrees_with_direct_symbol(diagram, crossing, subset):
    assert_regrade_matches_direct(diagram, crossing, subset)


def test_regrade_to_smaller_crossing():
    fine = symbol_of("G3", "I", "123")
    coarse = algebra_builder.regrade(fine, (1,))
    direct = symbol_of("G3", "I", "1")
    assert coarse.graded_dims() == direct.graded_dims()
    assert coarse.bracket_rank(-1, -1) == direct.bracket_rank(-1, -1)
    assert coarse.metadata["route"] == "regrade"
    assert parabolic_of(coarse) == parabolic("G3", "I", "1")


@pytest.mark.parametrize("algebra, xi, crossing", [("G3", "II", "13"), ("F4", "IV", "2")])
def test_regrade_with_same_crossing_is_identity(algebra, xi, crossing):
    symbol = symbol_of(algebra, xi, crossing)
    same = algebra_builder.regrade(symbol, symbol.metadata["crossing"])
    assert same.basis == symbol.basis
    assert list(same.table.entries()) == list(symbol.table.entries())
    assert parabolic_of(same) == parabolic_of(symbol)


def test_regrade_needs_a_subset():
    with pytest.raises(InvalidDiagramError):
        algebra_builder.regrade(symbol_of("G3", "I", "1"), (2,))


def test_grading_element_acts_by_degree(g3_full):
    p = parabolic("G3", "I", "13")
    grading = algebra_builder.grading_element(g3_full, p)
    for element in g3_full.basis:
        degree = crossing_weight(element.multidegree, p.crossing)
        value = g3_full.bracket(grading, {element.index: Fraction(1)})
        assert value == ({element.index: Fraction(degree)} if degree else {})


def test_graded_parts_cover_the_algebra(f4_full):
    parts = algebra_builder.graded_parts(f4_full, parabolic("F4", "I", "4"))
    assert sorted(parts) == [-1, 0, 1]
    assert sum(len(indices) for indices in parts.values()) == 40


@pytest.mark.parametrize("algebra, xi, crossing, dims", [
    ("G3", "I", "1", SuperDim(15, 0)),
    ("G3", "III", "1", SuperDim(7, 6)),
    ("F4", "I", "1", SuperDim(22, 0)),
    ("F4", "I", "4", SuperDim(12, 8)),
    ("F4", "III", "3", SuperDim(10, 8)),
])
def test_levi_action_dimensions(algebra, xi, crossing, dims):
    p = parabolic(algebra, xi, crossing)
    maps = algebra_builder.levi_action(algebra_builder.build_full(p.diagram), p)
    assert span_dims(maps) == dims
    assert all(m.parity in (Parity.EVEN, Parity.ODD) for m in maps)


def test_reduction_spec_names_symbol_coordinates(g3_full):
    p = parabolic("G3", "I", "1")
    spec = algebra_builder.reduction_spec(g3_full, p, name="G(2)+C")
    symbol = algebra_builder.build_symbol(p)
    minus_one = {symbol.basis[i].label for i in symbol.indices_of_degree(-1)}
    assert set(spec.basis_labels) == minus_one
    assert spec.name == "G(2)+C"
    assert spec.dim == SuperDim(15, 0)
    assert spec.closure_defect() is None

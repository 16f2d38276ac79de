from fractions import Fraction

import pytest

from models.roots import (
    AmbientWeight,
    DiagramId,
    InvalidDiagramError,
    MixedAlgebraError,
    ParabolicId,
    SuperAlgebraName,
)
from models.superalgebra import Parity, SuperDim
from services.root_system import root_system
from utils.renderers import parse_root_table
from tests.conftest import F4, G3


ALL_DIAGRAMS = [DiagramId(algebra, xi) for algebra in (G3, F4) for xi in algebra.diagrams]


def weight(algebra, *coeffs):
    return AmbientWeight(algebra, coeffs)


def test_simple_systems():
    h = Fraction(1, 2)
    assert root_system.simple_system(DiagramId.parse("G3", "I")) == [
        weight(G3, 1, -1, -1, 0), weight(G3, 0, 1, 0, 0), weight(G3, 0, -1, 1, 0),
    ]
    assert root_system.simple_system(DiagramId.parse("F4", "V")) == [
        weight(F4, 1, 0, 0, 0), weight(F4, -h, h, -h, -h), weight(F4, 0, 0, 0, 1), weight(F4, 0, 0, 1, -1),
    ]
    assert root_system.simple_system(DiagramId.parse("F4", "I"))[0] == weight(F4, h, -h, -h, -h)


def test_killing_pairing():
    delta = weight(G3, 1, 0, 0, 0)
    assert root_system.killing_pairing(delta, delta) == 2
    eps_sum = weight(G3, 0, 1, 1, 1)
    assert eps_sum.is_zero()
    assert root_system.killing_pairing(eps_sum, weight(G3, 1, 2, 0, -1)) == 0
    assert root_system.killing_pairing(weight(G3, 0, 1, 0, 0), weight(G3, 0, 1, 0, 0)) == -2
    e1, e2 = weight(F4, 0, 1, 0, 0), weight(F4, 0, 0, 1, 0)
    assert root_system.killing_pairing(e1, e2) == 0
    assert root_system.killing_pairing(e1, e1) == 1
    assert root_system.killing_pairing(weight(F4, 1, 0, 0, 0), weight(F4, 1, 0, 0, 0)) == -3
    with pytest.raises(MixedAlgebraError):
        root_system.killing_pairing(delta, e1)


@pytest.mark.parametrize("diagram", ALL_DIAGRAMS, ids=str)
def test_root_counts(diagram):
    positive = root_system.positive_roots(diagram)
    even = sum(1 for r in positive if r.parity is Parity.EVEN)
    odd = sum(1 for r in positive if r.parity is Parity.ODD)
    assert (even, odd) == ((7, 7) if diagram.algebra is G3 else (10, 8))


@pytest.mark.parametrize("diagram", ALL_DIAGRAMS, ids=str)
def test_roots_are_sign_coherent_and_closed_under_negation(diagram):
    roots = root_system.enumerate_roots(diagram)
    coeffs = [r.coeffs for r in roots]
    assert len(set(coeffs)) == len(coeffs)
    for root in roots:
        assert all(c >= 0 for c in root.coeffs) or all(c <= 0 for c in root.coeffs)
        assert tuple(-c for c in root.coeffs) in coeffs
        assert root_system.root_parity(root.ambient) == root.parity


@pytest.mark.parametrize("diagram", ALL_DIAGRAMS, ids=str)
def test_sums_of_simple_roots_are_enumerated(diagram):
    simple = root_system.simple_system(diagram)
    coeffs = {r.coeffs for r in root_system.enumerate_roots(diagram)}
    for i in range(diagram.rank):
        for j in range(i + 1, diagram.rank):
            if root_system.root_parity(simple[i] + simple[j]) is not None:
                vector = tuple(1 if k in (i, j) else 0 for k in range(diagram.rank))
                assert vector in coeffs


def test_highest_root_of_g3_first_diagram():
    diagram = DiagramId.parse("G3", "I")
    lowest = min(root_system.negative_roots(diagram), key=lambda r: r.height)
    assert lowest.coeffs == (-2, -4, -2)
    assert lowest.label == "-2a1-4a2-2a3"
    assert lowest.parity is Parity.EVEN
    assert root_system.grading_weight(lowest, ParabolicId.parse("G3", "I", "1")) == -2


def test_grading_weight():
    p = ParabolicId.parse("G3", "IV", "2")
    assert root_system.grading_weight((0, -1, 0), p) == -1
    assert root_system.grading_weight((-1, 0, -1), p) == 0
    with pytest.raises(InvalidDiagramError):
        root_system.grading_weight((0, -1), p)


@pytest.mark.parametrize("algebra, xi, crossing, depth", [
    ("G3", "I", "1", 2),
    ("F4", "VI", "1234", 11),
    ("F4", "I", "4", 1),
])
def test_depth_examples(algebra, xi, crossing, depth):
    assert root_system.depth(ParabolicId.parse(algebra, xi, crossing)) == depth


@pytest.mark.parametrize("algebra", [G3, F4], ids=lambda a: a.value)
def test_depth_matches_golden_atlas(algebra, golden_atlas):
    for row in golden_atlas[algebra].rows:
        xi, crossing = row.label.split("_")
        assert root_system.depth(ParabolicId.parse(algebra.value, xi, crossing)) == row.depth, row.label


def test_class_counts():
    assert len(root_system.all_parabolics(G3)) == 4 * 7
    assert len(root_system.all_parabolics(F4)) == 6 * 15
    assert len(root_system.parabolic_classes(G3)) == 19
    assert len(root_system.parabolic_classes(F4)) == 55


@pytest.mark.parametrize("algebra", [G3, F4], ids=lambda a: a.value)
def test_representatives_follow_atlas_order(algebra, golden_atlas):
    labels = [p.label for p in root_system.representatives(algebra)]
    assert labels == golden_atlas[algebra].labels


@pytest.mark.parametrize("algebra", [G3, F4], ids=lambda a: a.value)
def test_equivalence_chains_are_single_classes(algebra):
    for chain in root_system.equivalence_chains(algebra):
        heads = {root_system.representative(member) for member in chain}
        assert len(heads) == 1, [str(member) for member in chain]


def test_dark_cases():
    contact = root_system.dark_case_for(ParabolicId.parse("G3", "I", "1"))
    assert contact.prolongation == "k(1|7)"
    assert contact.der0_dim == SuperDim(22, 0)
    assert contact.reduction_dim == SuperDim(15, 0)
    reflected = root_system.dark_case_for(ParabolicId.parse("G3", "IV", "1"))
    assert reflected.reduction_name == "cosp(3|2)"
    assert root_system.dark_case_for(ParabolicId.parse("F4", "V", "1")).der0_dim == SuperDim(52, 48)
    assert root_system.dark_case_for(ParabolicId.parse("F4", "VI", "4")).prolongation == "k(7|4)"
    assert root_system.dark_case_for(ParabolicId.parse("G3", "I", "2")) is None


def test_identifiers():
    p = ParabolicId.parse("f4", "iii", "3,1")
    assert p.crossing == (1, 3)
    assert str(p) == "F4 III_13"
    assert SuperAlgebraName.parse("G(3)") is G3
    with pytest.raises(InvalidDiagramError):
        DiagramId.parse("G3", "V")
    with pytest.raises(InvalidDiagramError):
        ParabolicId.parse("G3", "I", "4")
    with pytest.raises(InvalidDiagramError):
        SuperAlgebraName.parse("E8")


def test_negative_root_table_lists_every_root():
    diagram = DiagramId.parse("G3", "II")
    table = root_system.negative_root_table(diagram)
    assert table.startswith("# G3 II negative roots")
    columns = parse_root_table(table)
    assert len(columns[Parity.EVEN]) == 7
    assert len(columns[Parity.ODD]) == 7
    negatives = {tuple(-c for c in r.coeffs) for r in root_system.negative_roots(diagram)}
    assert set(columns[Parity.EVEN]) | set(columns[Parity.ODD]) == negatives

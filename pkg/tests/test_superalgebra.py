from fractions import Fraction

import pytest

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
from utils.linalg import DimensionMismatchError, ExactMatrix


EVEN, ODD = Parity.EVEN, Parity.ODD


def make_algebra(specs, brackets):
    """specs: (label, parity, degree); brackets: {(i, j): {k: coef}}."""
    basis = [BasisElement(n, parity, degree, label) for n, (label, parity, degree) in enumerate(specs)]
    table = StructureTable([b.parity for b in basis])
    for (i, j), value in brackets.items():
        table.set_bracket(i, j, value)
    return GradedLieSuperalgebra(basis=tuple(basis), table=table)


def heisenberg():
    return make_algebra(
        [("z", EVEN, -2), ("t1", ODD, -1), ("t2", ODD, -1)],
        {(1, 1): {0: 1}, (2, 2): {0: 1}},
    )


def test_parity_arithmetic():
    assert Parity.ODD + 1 == Parity.EVEN
    assert Parity.ODD.sign(Parity.ODD) == -1
    assert Parity.EVEN.sign(Parity.ODD) == 1


def test_superdim_text_forms():
    dim = SuperDim.parse("(17|14)")
    assert dim == SuperDim(17, 14)
    assert str(dim) == "(17|14)"
    assert dim.compact() == "17|14"
    assert dim.total == 31
    assert SuperDim(1, 7).fits_in(dim)
    assert SuperDim(2, 3) + SuperDim(1, 1) == SuperDim(3, 4)
    with pytest.raises(ValueError):
        SuperDim(-1, 0)


def test_structure_table_super_antisymmetry():
    table = StructureTable([EVEN, ODD, ODD])
    table.set_bracket(1, 0, {2: 1})
    assert table.get(0, 1) == {2: Fraction(-1)}
    table.set_bracket(2, 1, {0: 3})
    assert table.get(1, 2) == {0: Fraction(3)}
    with pytest.raises(ValueError):
        table.set_bracket(0, 0, {0: 1})


def test_heisenberg_dims_and_jacobi():
    algebra = heisenberg()
    assert algebra.superdim == SuperDim(1, 2)
    assert algebra.graded_dims() == {-2: SuperDim(1, 0), -1: SuperDim(0, 2)}
    assert algebra.check_grading() is None
    assert algebra.check_jacobi().success
    assert algebra.derived_dims() == SuperDim(1, 0)
    assert algebra.bracket_rank(-1, -1) == 1
    assert algebra.bracket([0, 1, 1], [0, 1, 1]) == {0: Fraction(2)}


def test_jacobi_failure_names_the_triple():
    broken = make_algebra(
        [("a", EVEN, 0), ("b", EVEN, 0), ("c", EVEN, 0)],
        {(0, 1): {0: 1}, (0, 2): {1: 1}},
    )
    report = broken.check_jacobi()
    assert not report.success
    assert report.witness == (0, 1, 2)
    assert "(a, b, c)" in report.error_message


def test_basis_must_match_table():
    table = StructureTable([EVEN])
    with pytest.raises(DimensionMismatchError):
        GradedLieSuperalgebra(basis=(BasisElement(0, ODD, 0, "x"),), table=table)


def test_dict_export_keeps_the_algebra():
    algebra = heisenberg()
    data = algebra.to_dict()
    assert [item["label"] for item in data["basis"]] == ["t1", "t2", "z"]
    restored = GradedLieSuperalgebra.from_dict(data)
    assert restored.graded_dims() == algebra.graded_dims()
    assert restored.check_jacobi().success
    assert restored.bracket_basis(restored.index_of("t1"), restored.index_of("t1")) == {restored.index_of("z"): 1}


def odd_pair():
    shape = SuperDim(1, 1)
    raising = GradedMap.from_images(shape, shape, [{1: 1}, {}], label="E")
    lowering = GradedMap.from_images(shape, shape, [{}, {0: 1}], label="F")
    return shape, raising, lowering


def test_supercommutator_of_odd_maps_anticommutes():
    shape, raising, lowering = odd_pair()
    assert raising.parity is Parity.ODD
    identity = GradedMap(shape, shape, ExactMatrix.identity(2))
    assert identity.parity is Parity.EVEN
    assert raising.supercommutator(lowering).matrix == identity.matrix
    assert raising.supercommutator(raising).matrix.is_zero()


def test_span_and_closure_of_maps():
    shape, raising, lowering = odd_pair()
    identity = GradedMap(shape, shape, ExactMatrix.identity(2))
    assert span_dims([raising, lowering, identity]) == SuperDim(1, 2)
    assert derived_span_dims([raising, lowering]) == SuperDim(1, 0)
    assert closure_defect([raising, lowering]) == (0, 1)
    assert closure_defect([raising, lowering, identity]) is None

import pytest

from config import settings
from models.prolongation import ProlongationStatus, ReductionSpec
from models.superalgebra import GradedMap, SuperDim, span_dims
from services.algebra_builder import algebra_builder
from services.case_runner import oracle_mismatch
from services.prolongation import ProlongationError, ReductionError, prolongation_service
from tests.conftest import parabolic, symbol_of
from utils.linalg import DimensionMismatchError


def nonnegative_dims(full, p):
    graded = algebra_builder.regraded_full(full, p).graded_dims()
    return {k: sd for k, sd in graded.items() if k >= 0}


def test_der0_of_contact_symbol():
    maps = prolongation_service.der0(symbol_of("G3", "I", "1"))
    assert span_dims(maps) == SuperDim(22, 0)


@pytest.mark.parametrize("xi, crossing", [("IV", "2"), ("I", "2"), ("II", "12")])
def test_nondark_cases_prolong_to_the_simple_algebra(xi, crossing, g3_full):
    p = parabolic("G3", xi, crossing)
    full = algebra_builder.build_full(p.diagram)
    result = prolongation_service.prolong(algebra_builder.build_symbol(p))
    assert result.status is ProlongationStatus.FINITE
    assert result.total_dim == SuperDim(17, 14)
    assert result.jacobi.success
    assert result.success
    assert result.level_dims == nonnegative_dims(full, p)
    assert oracle_mismatch(result.algebra, full, p) is None
    assert result.stop_reason.endswith("= 0")


def test_reduced_contact_case_is_finite(g3_full):
    p = parabolic("G3", "I", "1")
    spec = algebra_builder.reduction_spec(g3_full, p, name="G(2)+C")
    result = prolongation_service.prolong(algebra_builder.build_symbol(p), reduction=spec)
    assert result.status is ProlongationStatus.FINITE
    assert result.level_dims[0] == SuperDim(15, 0)
    assert result.total_dim == SuperDim(17, 14)
    assert result.jacobi.success
    assert oracle_mismatch(result.algebra, g3_full, p) is None


@pytest.mark.slow
def test_unreduced_contact_case_grows_like_k17():
    result = prolongation_service.prolong(symbol_of("G3", "I", "1"), threshold=3)
    assert result.status is ProlongationStatus.THRESHOLD_EXCEEDED
    assert result.jacobi is None
    assert result.level_dims == {
        0: SuperDim(22, 0),
        1: SuperDim(0, 42),
        2: SuperDim(57, 0),
        3: SuperDim(0, 63),
    }
    assert "threshold 3" in result.stop_reason


@pytest.mark.slow
def test_unreduced_vect_case_hits_the_unknown_cap():
    result = prolongation_service.prolong(symbol_of("F4", "I", "4"))
    assert result.status is ProlongationStatus.THRESHOLD_EXCEEDED
    assert result.level_dims == {0: SuperDim(52, 48), 1: SuperDim(258, 252)}
    assert "cap" in result.stop_reason


def test_unknown_cap_stops_before_level_zero(monkeypatch):
    monkeypatch.setattr(settings, "max_level_unknowns", 10)
    result = prolongation_service.prolong(symbol_of("G3", "I", "1"))
    assert result.status is ProlongationStatus.THRESHOLD_EXCEEDED
    assert result.level_dims == {}
    assert result.stop_reason == "level 0 needs 49 unknowns"


def test_threshold_below_depth_is_rejected():
    with pytest.raises(ProlongationError):
        prolongation_service.prolong(symbol_of("G3", "I", "1"), threshold=2)


def test_reduction_for_another_parabolic_is_rejected(g3_full):
    spec = algebra_builder.reduction_spec(g3_full, parabolic("G3", "I", "2"))
    with pytest.raises(ReductionError):
        prolongation_service.prolong(symbol_of("G3", "I", "1"), reduction=spec)


def test_reduction_without_grading_element_is_rejected(g3_full):
    p = parabolic("G3", "I", "1")
    spec = algebra_builder.reduction_spec(g3_full, p)
    nilpotent = next(m for m in spec.maps if not m.label.startswith("h"))
    partial = ReductionSpec(maps=(nilpotent,), basis_labels=spec.basis_labels, name="partial")
    with pytest.raises(ReductionError):
        prolongation_service.prolong(algebra_builder.build_symbol(p), reduction=partial)


def test_reduction_maps_must_fit_the_labels():
    shape = SuperDim(1, 1)
    with pytest.raises(DimensionMismatchError):
        ReductionSpec(maps=(GradedMap.zero(shape, shape),), basis_labels=("x",))

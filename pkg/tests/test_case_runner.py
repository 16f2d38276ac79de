import asyncio

import pytest
from pydantic import ValidationError

from models.reports import CaseReport, CaseRequest, CaseRequestError, ReductionMode
from models.roots import ParabolicId
from models.superalgebra import GradedLieSuperalgebra, SuperDim
from services.case_runner import CaseRunner, all_requests, expected_null_span, run_case
from tests.conftest import F4, G3
from utils.file_manager import ReportFileManager


def request(algebra, diagram, crossing, **kwargs):
    return CaseRequest(algebra=algebra, diagram=diagram, crossing=crossing, **kwargs)


def test_request_validation():
    req = request("g3", "iv", [3, 1, 3])
    assert req.algebra == "G3"
    assert req.diagram == "IV"
    assert req.crossing == [1, 3]
    assert req.case_id == "G3 IV_13"
    with pytest.raises(ValidationError):
        request("G3", "V", [1])
    with pytest.raises(ValidationError):
        request("G3", "I", [])
    with pytest.raises(ValidationError):
        request("E8", "I", [1])
    with pytest.raises(ValidationError):
        request("G3", "I", [1], threshold=0)
    with pytest.raises(CaseRequestError):
        request("G3", "I", [4]).parabolic


def test_finite_report_needs_oracle_verdict():
    with pytest.raises(ValidationError):
        CaseReport(case="G3 I_2", status="finite")


def test_expected_null_span_follows_classes():
    assert expected_null_span(ParabolicId.parse("G3", "II", "1")) == SuperDim(2, 1)
    assert expected_null_span(ParabolicId.parse("G3", "I", "1")) is None


def test_run_nondark_case():
    report = run_case(request("G3", "IV", [2]))
    assert report.passed, report.error_message
    assert report.status == "finite"
    assert report.reduction == "none"
    assert report.total_dim == "(17|14)"
    assert report.growth_vector == ["2|4", "1|2", "2|0"]
    assert report.depth == 3
    assert report.jacobi_ok is True
    assert report.oracle_match is True
    assert report.symbol_match is True
    assert report.null_span_full is True


def test_run_contact_case_with_reduction():
    report = run_case(request("G3", "I", [1]))
    assert report.passed, report.error_message
    assert report.reduction == "G(2)+C"
    assert report.level_dims[0] == "(15|0)"
    assert report.total_dim == "(17|14)"


@pytest.mark.slow
def test_run_contact_case_without_reduction():
    report = run_case(request("G3", "I", [1], reduce=ReductionMode.NONE))
    assert report.passed, report.error_message
    assert report.status == "threshold_exceeded"
    assert report.level_dims[0] == "(22|0)"
    assert report.oracle_match is None


def test_run_special_null_span_case():
    report = run_case(request("G3", "II", [1]))
    assert report.passed, report.error_message
    assert report.null_span == "(2|1)"
    assert report.null_span_full is False


def test_all_requests_cover_every_class():
    requests = all_requests([G3, F4])
    assert len(requests) == 19 + 55
    assert requests[0].case_id == "G3 I_1"
    assert all(r.reduce is ReductionMode.AUTO for r in requests)


def test_batch_writes_a_sorted_summary(tmp_path):
    files = ReportFileManager(tmp_path)

    async def scenario():
        async with CaseRunner(jobs=1, files=files) as runner:
            reports = await runner.verify_all([request("G3", "IV", [2]), request("G3", "I", [2])])
            written = await runner.write_reports(reports)
            return reports, written

    reports, written = asyncio.run(scenario())
    assert [r.case for r in reports] == ["G3 I_2", "G3 IV_2"]
    data = asyncio.run(files.read_json(written["path"]))
    assert data["total"] == 2
    assert data["passed"] == 2
    assert [case["case"] for case in data["cases"]] == ["G3 I_2", "G3 IV_2"]


def test_repeated_batches_write_identical_bytes(tmp_path):
    first, second = ReportFileManager(tmp_path / "first"), ReportFileManager(tmp_path / "second")
    requests = [request("G3", "IV", [2]), request("G3", "II", [1])]

    async def scenario(files):
        async with CaseRunner(jobs=1, files=files) as runner:
            reports = await runner.verify_all(requests)
            return await runner.write_reports(reports)

    one = asyncio.run(scenario(first))
    two = asyncio.run(scenario(second))
    assert (tmp_path / "first" / "verify.json").read_bytes() == (tmp_path / "second" / "verify.json").read_bytes()
    assert one["path"].endswith("verify.json") and two["path"].endswith("verify.json")


def test_report_carries_no_timing():
    report = run_case(request("G3", "IV", [2]))
    assert "processing_time" not in report.dict()


def test_export_full_algebra_round_trips(tmp_path):
    runner = CaseRunner(files=ReportFileManager(tmp_path))
    path = asyncio.run(runner.export_full(G3, "II"))
    assert path.endswith("g3_II_full.json")
    data = asyncio.run(runner.files.read_json(path))
    assert len(data["basis"]) == 31
    algebra = GradedLieSuperalgebra.from_dict(data)
    assert algebra.superdim == SuperDim(17, 14)
    assert algebra.check_jacobi().success


def test_export_case_records_status(tmp_path):
    runner = CaseRunner(files=ReportFileManager(tmp_path))
    path = asyncio.run(runner.export_case(request("G3", "IV", [2])))
    data = asyncio.run(runner.files.read_json(path))
    assert data["metadata"]["status"] == "finite"
    assert data["metadata"]["crossing"] == [2]
    assert GradedLieSuperalgebra.from_dict(data).graded_dims()[-3] == SuperDim(2, 0)


def test_atlas_diff_is_empty_for_g3(atlas_repository):
    runner = CaseRunner()
    runner.atlas_repository = atlas_repository
    assert asyncio.run(runner.atlas_diff(G3)) == []


@pytest.mark.slow
@pytest.mark.parametrize("req", all_requests([G3, F4]), ids=lambda r: r.case_id)
def test_every_case_passes(req):
    report = run_case(req)
    assert report.passed, report.error_message


def test_fixtures_are_verified_before_a_batch(atlas_repository):
    runner = CaseRunner()
    runner.atlas_repository = atlas_repository
    assert asyncio.run(runner.verify_fixtures()) == [G3, F4]

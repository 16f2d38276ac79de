"""Per-case pipeline and batch driver.

A case builds the symbol algebra of a parabolic, prolongs it (reducing the
degree-0 part first for the contact and irreducible cases when asked to),
reads off the geometric invariants and compares the result with the graded
pieces of the simple algebra itself.
"""

from __future__ import annotations
import asyncio
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Dict, List, Optional, Sequence

import structlog

from config import settings
from models.prolongation import ProlongationResult, ProlongationStatus
from models.reports import CaseReport, CaseRequest, ReductionMode
from models.roots import DarkCase, ParabolicId, SuperAlgebraName
from models.superalgebra import GradedLieSuperalgebra, SuperDim
from repositories.atlas_repository import AtlasRepository
from services.algebra_builder import algebra_builder
from services.geometry import SPECIAL_NULL_SPANS, geometry_service
from services.prolongation import prolongation_service
from services.root_system import root_system
from utils.file_manager import ReportFileManager, file_manager
from utils.progress_tracker import CaseStep, ProgressTracker


logger = structlog.get_logger()


def expected_null_span(parabolic: ParabolicId) -> Optional[SuperDim]:
    """Null span of the special parabolics, None when the null vectors span g_-1."""
    representative = root_system.representative(parabolic)
    for (xi, crossing), span in SPECIAL_NULL_SPANS[parabolic.algebra].items():
        if root_system.representative(ParabolicId.parse(parabolic.algebra.value, xi, crossing)) == representative:
            return span
    return None


def oracle_mismatch(result: GradedLieSuperalgebra, full: GradedLieSuperalgebra, parabolic: ParabolicId) -> Optional[str]:
    """Compare a prolongation with the regraded simple algebra; None when they agree."""
    reference = algebra_builder.regraded_full(full, parabolic)
    expected = reference.graded_dims()
    actual = result.graded_dims()
    if expected != actual:
        return f"graded dimensions {actual} differ from {expected}"
    degrees = sorted(actual)
    for n, first in enumerate(degrees):
        for second in degrees[n:]:
            if first + second not in actual:
                continue
            if result.bracket_rank(first, second) != reference.bracket_rank(first, second):
                return f"bracket rank differs on degrees ({first}, {second})"
    return None


def _verdict(report: CaseReport, result: ProlongationResult, dark: Optional[DarkCase], reduced: bool) -> str:
    """Reason the report disagrees with the reference data, empty when it agrees."""
    if result.status is ProlongationStatus.FINITE:
        if dark is not None and not reduced:
            return f"expected an infinite prolongation ({dark.prolongation})"
        if not report.jacobi_ok:
            return "prolongation fails the Jacobi identity"
        if not report.oracle_match:
            return "prolongation disagrees with the graded simple algebra"
        return ""
    if dark is None or reduced:
        return f"prolongation did not terminate: {result.stop_reason}"
    level_zero = result.level_dims.get(0)
    if level_zero != dark.der0_dim:
        return f"der0 is {level_zero}, expected {dark.der0_name} {dark.der0_dim}"
    return ""


def run_case(request: CaseRequest) -> CaseReport:
    """Run one parabolic case end to end."""
    start_time = time.time()
    parabolic = request.parabolic
    case_id = str(parabolic)
    try:
        symbol = algebra_builder.build_symbol(parabolic)
        full = algebra_builder.build_full(parabolic.diagram)
        dark = root_system.dark_case_for(parabolic)

        reduction = None
        reduction_name = "none"
        if request.reduce is ReductionMode.AUTO and dark is not None:
            reduction_name = dark.reduction_name
            reduction = algebra_builder.reduction_spec(full, parabolic, name=reduction_name)

        cross = algebra_builder.cross_check_symbol(full, symbol, parabolic)
        result = prolongation_service.prolong(symbol, reduction=reduction, threshold=request.threshold)

        growth = geometry_service.growth_vector(symbol)
        null = geometry_service.null_span(symbol)
        finite = result.status is ProlongationStatus.FINITE
        mismatch = oracle_mismatch(result.algebra, full, parabolic) if finite else None

        report = CaseReport(
            case=case_id,
            reduction=reduction_name,
            status=result.status.value,
            level_dims={k: str(sd) for k, sd in sorted(result.level_dims.items())},
            total_dim=str(result.total_dim),
            growth_vector=[sd.compact() for sd in growth],
            depth=len(growth),
            jacobi_ok=result.jacobi.success if result.jacobi is not None else None,
            oracle_match=(mismatch is None) if finite else None,
            symbol_match=cross.success,
            null_span=str(null.span),
            null_span_full=null.full,
        )

        messages = []
        verdict = _verdict(report, result, dark, reduction is not None)
        if verdict:
            messages.append(verdict)
        if mismatch:
            messages.append(mismatch)
        if not cross.success:
            messages.append(f"symbol algebra disagrees with the full algebra: {cross.error_message}")
        special = expected_null_span(parabolic)
        if (special is None and not null.full) or (special is not None and null.span != special):
            messages.append(f"null span {null.span} differs from the reference")
        report.passed = not messages
        report.error_message = "; ".join(messages)

    except Exception as e:
        logger.error("Case run failed", case=case_id, error=str(e), exc_info=True)
        report = CaseReport(case=case_id, status="error", error_message=str(e))

    processing_time = round(time.time() - start_time, 3)
    logger.info(
        "Case finished",
        case=case_id,
        status=report.status,
        passed=report.passed,
        total=report.total_dim,
        processing_time=processing_time,
    )
    return report


def all_requests(algebras: Sequence[SuperAlgebraName], reduce: ReductionMode = ReductionMode.AUTO) -> List[CaseRequest]:
    """One request per class of parabolics, in atlas order."""
    requests = []
    for algebra in algebras:
        for parabolic in root_system.representatives(algebra):
            requests.append(CaseRequest(
                algebra=algebra.value,
                diagram=parabolic.diagram.xi,
                crossing=list(parabolic.crossing),
                reduce=reduce,
            ))
    return requests


class CaseRunner:
    """Fans cases out over worker processes and collects their reports."""

    def __init__(self, jobs: Optional[int] = None, files: Optional[ReportFileManager] = None):
        self.jobs = jobs or settings.default_jobs
        self.files = files or file_manager
        self.atlas_repository = AtlasRepository()
        self._executor: Optional[ProcessPoolExecutor] = None

    async def __aenter__(self) -> CaseRunner:
        if self.jobs > 1:
            self._executor = ProcessPoolExecutor(max_workers=self.jobs)
        return self

    async def __aexit__(self, exc_type, exc, tb):
        if self._executor is not None:
            self._executor.shutdown(wait=True)
            self._executor = None

    async def _run_one(self, request: CaseRequest, tracker: ProgressTracker) -> CaseReport:
        case_id = request.case_id
        await tracker.start_case(case_id, CaseStep.PROLONGING)
        loop = asyncio.get_running_loop()
        if self._executor is not None:
            report = await loop.run_in_executor(self._executor, run_case, request)
        else:
            report = run_case(request)
        if report.passed:
            await tracker.complete_case(case_id, {"status": report.status})
        else:
            await tracker.fail_case(case_id, report.error_message or report.status)
        return report

    async def verify_all(self, requests: Sequence[CaseRequest]) -> List[CaseReport]:
        """Run every request; reports come back sorted by case id."""
        tracker = ProgressTracker(total=len(requests))
        reports = await asyncio.gather(*(self._run_one(request, tracker) for request in requests))
        logger.info("Batch finished", **tracker.summary())
        return sorted(reports, key=lambda report: report.case)

    async def write_reports(self, reports: Sequence[CaseReport], name: str = "verify") -> Dict[str, str]:
        """JSON summary of a batch, one entry per case."""
        path = self.files.path_for(name, ".json")
        data = {
            "cases": [report.dict() for report in reports],
            "passed": sum(1 for report in reports if report.passed),
            "total": len(reports),
        }
        await self.files.write_json(path, data)
        return {"path": str(path)}

    async def verify_fixtures(self) -> List[SuperAlgebraName]:
        """Load every golden table up front; a bad checksum fails before any case runs."""
        tables = await self.atlas_repository.get_all()
        algebras = [table.algebra for table in tables]
        logger.info("Fixtures verified", tables=len(tables), algebras=[a.value for a in algebras])
        return algebras

    async def atlas_diff(self, algebra: SuperAlgebraName) -> List[str]:
        """Diff of the generated growth-vector atlas against the golden table."""
        generated = geometry_service.atlas(algebra)
        return await self.atlas_repository.diff(algebra, generated)

    async def export_case(self, request: CaseRequest, output: Optional[str] = None) -> str:
        """Write the prolonged algebra of a finite case as JSON."""
        parabolic = request.parabolic
        symbol = algebra_builder.build_symbol(parabolic)
        reduction = None
        dark = root_system.dark_case_for(parabolic)
        if request.reduce is ReductionMode.AUTO and dark is not None:
            full = algebra_builder.build_full(parabolic.diagram)
            reduction = algebra_builder.reduction_spec(full, parabolic, name=dark.reduction_name)
        result = prolongation_service.prolong(symbol, reduction=reduction, threshold=request.threshold)
        data = result.algebra.to_dict()
        data["metadata"]["status"] = result.status.value
        path = output or self.files.path_for(request.case_id, ".json")
        await self.files.write_json(path, data)
        return str(path)

    async def export_full(self, algebra: SuperAlgebraName, diagram: str = "I", output: Optional[str] = None) -> str:
        """Write the simple algebra in the Chevalley basis of one diagram as JSON."""
        full = algebra_builder.build_full(ParabolicId.parse(algebra.value, diagram, "1").diagram)
        path = output or self.files.path_for(f"{algebra.value} {diagram}", "_full.json")
        await self.files.write_json(path, full.to_dict())
        return str(path)

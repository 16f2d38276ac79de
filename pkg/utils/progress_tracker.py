"""Progress tracking for batch case runs."""

from __future__ import annotations
import asyncio
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from typing import Any, Callable, Dict, List, Optional

import structlog


logger = structlog.get_logger()


class CaseStep(str, Enum):
    """Stages of a single case run."""
    BUILDING = "building"
    REDUCING = "reducing"
    PROLONGING = "prolonging"
    ANALYSING = "analysing"
    COMPARING = "comparing"
    COMPLETED = "completed"
    FAILED = "failed"


@dataclass
class ProgressState:
    """Latest known state of one case."""
    case_id: str
    step: CaseStep
    message: str = ""
    error: Optional[str] = None
    started_at: datetime = field(default_factory=lambda: datetime.now(timezone.utc))
    metadata: Dict[str, Any] = field(default_factory=dict)


class ProgressTracker:
    """Tracks the cases of a batch run and reports state changes."""

    def __init__(
        self,
        total: int = 0,
        update_callback: Optional[Callable[[ProgressState], Any]] = None,
    ):
        self.total = total
        self.update_callback = update_callback
        self.states: Dict[str, ProgressState] = {}
        self._lock = asyncio.Lock()

    async def update_progress(
        self,
        case_id: str,
        step: CaseStep,
        message: str = "",
        error: Optional[str] = None,
        metadata: Optional[Dict[str, Any]] = None,
    ) -> None:
        async with self._lock:
            state = ProgressState(case_id=case_id, step=step, message=message, error=error, metadata=metadata or {})
            self.states[case_id] = state
            if self.update_callback:
                try:
                    if asyncio.iscoroutinefunction(self.update_callback):
                        await self.update_callback(state)
                    else:
                        self.update_callback(state)
                except Exception as e:
                    logger.error("Progress callback failed", error=str(e))

    async def start_case(self, case_id: str, step: CaseStep = CaseStep.BUILDING) -> None:
        logger.info("Starting case", case=case_id, step=step.value)
        await self.update_progress(case_id, step, "started")

    async def complete_case(self, case_id: str, metadata: Optional[Dict[str, Any]] = None) -> None:
        logger.info("Completed case", case=case_id, done=self.finished, total=self.total, **(metadata or {}))
        await self.update_progress(case_id, CaseStep.COMPLETED, "completed", metadata=metadata)

    async def fail_case(self, case_id: str, error_message: str) -> None:
        logger.error("Case failed", case=case_id, error=error_message)
        await self.update_progress(case_id, CaseStep.FAILED, "failed", error=error_message)

    def _with_step(self, step: CaseStep) -> List[str]:
        return sorted(case for case, state in self.states.items() if state.step is step)

    @property
    def completed(self) -> List[str]:
        return self._with_step(CaseStep.COMPLETED)

    @property
    def failed(self) -> List[str]:
        return self._with_step(CaseStep.FAILED)

    @property
    def finished(self) -> int:
        return len(self.completed) + len(self.failed)

    def summary(self) -> Dict[str, Any]:
        return {
            "total": self.total,
            "completed": len(self.completed),
            "failed": len(self.failed),
            "failed_cases": self.failed,
        }

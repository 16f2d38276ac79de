"""Report and export file management."""

from __future__ import annotations
import json
import uuid
from contextlib import asynccontextmanager
from pathlib import Path
from typing import Any, AsyncIterator, Optional

import aiofiles
import aiofiles.os
import structlog

from config import settings


logger = structlog.get_logger()


class ReportFileManager:
    """Writes reports below the output directory, replacing files atomically."""

    def __init__(self, output_dir: Optional[str | Path] = None):
        self.output_dir = Path(output_dir if output_dir is not None else settings.output_dir)

    def path_for(self, name: str, suffix: str = "") -> Path:
        """Report path for a case id or table name, e.g. ``G3 I_13`` -> ``g3_I_13.json``."""
        stem = name.strip().replace(" ", "_")
        if stem[:2].upper() in ("G3", "F4"):
            stem = stem[:2].lower() + stem[2:]
        return self.output_dir / f"{stem}{suffix}"

    @asynccontextmanager
    async def atomic_path(self, target: Path) -> AsyncIterator[Path]:
        """Yield a scratch path that replaces ``target`` once the block succeeds."""
        target.parent.mkdir(parents=True, exist_ok=True)
        scratch = target.with_name(f".{target.name}.{uuid.uuid4().hex[:8]}")
        try:
            yield scratch
            await aiofiles.os.replace(scratch, target)
        finally:
            if scratch.exists():
                scratch.unlink()
                logger.debug("Removed scratch file", file=str(scratch))

    async def write_text(self, target: str | Path, content: str) -> Path:
        target = Path(target)
        async with self.atomic_path(target) as scratch:
            async with aiofiles.open(scratch, "w", encoding="utf-8") as f:
                await f.write(content)
        logger.info("Report written", file=str(target), size=len(content))
        return target

    async def write_json(self, target: str | Path, data: Any) -> Path:
        """Write JSON with sorted keys so repeated runs produce identical bytes."""
        return await self.write_text(target, json.dumps(data, indent=2, sort_keys=True) + "\n")

    async def read_text(self, source: str | Path) -> str:
        async with aiofiles.open(Path(source), "r", encoding="utf-8") as f:
            return await f.read()

    async def read_json(self, source: str | Path) -> Any:
        return json.loads(await self.read_text(source))


# Global file manager instance
file_manager = ReportFileManager()

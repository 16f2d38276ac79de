"""Base repository for reference data stored as text files under the data directory."""

from __future__ import annotations
import hashlib
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Dict, Generic, List, Optional, TypeVar

import aiofiles
import structlog

from config import settings


logger = structlog.get_logger()

RecordType = TypeVar("RecordType")

MANIFEST_NAME = "SHA256SUMS"


class FixtureChecksumError(Exception):
    """Raised when a fixture does not match its recorded SHA-256 digest."""
    pass


class BaseRepository(Generic[RecordType], ABC):
    """Read-only repository over files below ``data_dir``, guarded by a checksum manifest."""

    def __init__(self, data_dir: Optional[str | Path] = None, verify_checksums: Optional[bool] = None):
        self.data_dir = Path(data_dir if data_dir is not None else settings.data_dir)
        self.verify_checksums = settings.verify_fixture_checksums if verify_checksums is None else verify_checksums
        self._manifest: Optional[Dict[str, str]] = None
        self._cache: Dict[str, RecordType] = {}

    @abstractmethod
    def keys(self) -> List[str]:
        """Identifiers of all records this repository knows."""

    @abstractmethod
    def path_for(self, key: str) -> str:
        """Path of a record relative to the data directory."""

    @abstractmethod
    def parse(self, key: str, text: str) -> RecordType:
        """Turn file contents into a record."""

    async def load_manifest(self) -> Dict[str, str]:
        if self._manifest is None:
            self._manifest = {}
            path = self.data_dir / MANIFEST_NAME
            if path.exists():
                async with aiofiles.open(path, "r", encoding="utf-8") as f:
                    content = await f.read()
                for line in content.splitlines():
                    if line.strip():
                        digest, name = line.split(maxsplit=1)
                        self._manifest[name.strip().lstrip("*")] = digest
        return self._manifest

    async def read_text(self, relative: str) -> str:
        """Read a fixture and check it against the manifest."""
        path = self.data_dir / relative
        async with aiofiles.open(path, "rb") as f:
            raw = await f.read()
        if self.verify_checksums:
            manifest = await self.load_manifest()
            expected = manifest.get(relative)
            actual = hashlib.sha256(raw).hexdigest()
            if expected is None:
                raise FixtureChecksumError(f"{relative} is not listed in {MANIFEST_NAME}")
            if expected != actual:
                logger.error("Fixture checksum mismatch", fixture=relative, expected=expected, actual=actual)
                raise FixtureChecksumError(f"{relative} has digest {actual}, expected {expected}")
        return raw.decode("utf-8")

    async def get_by_id(self, key: str) -> Optional[RecordType]:
        """Get a record by key, None when its file does not exist."""
        if key in self._cache:
            return self._cache[key]
        relative = self.path_for(key)
        if not (self.data_dir / relative).exists():
            return None
        record = self.parse(key, await self.read_text(relative))
        self._cache[key] = record
        logger.debug("Fixture loaded", fixture=relative)
        return record

    async def get_all(self) -> List[RecordType]:
        records = []
        for key in self.keys():
            record = await self.get_by_id(key)
            if record is not None:
                records.append(record)
        return records

    async def exists(self, key: str) -> bool:
        return key in self.keys() and (self.data_dir / self.path_for(key)).exists()

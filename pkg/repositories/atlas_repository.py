"""Golden growth-vector tables, one file per algebra."""

from __future__ import annotations
import difflib
from dataclasses import dataclass, field
from typing import Dict, List, Optional

from models.roots import SuperAlgebraName
from models.superalgebra import SuperDim
from repositories.base import BaseRepository
from utils.renderers import parse_growth


@dataclass
class AtlasRow:
    label: str
    dim: SuperDim
    depth: int
    growth: List[SuperDim]


@dataclass
class AtlasTable:
    """Parsed golden atlas together with its exact text."""
    algebra: SuperAlgebraName
    text: str
    rows: List[AtlasRow] = field(default_factory=list)

    def row(self, label: str) -> Optional[AtlasRow]:
        for row in self.rows:
            if row.label == label:
                return row
        return None

    @property
    def labels(self) -> List[str]:
        return [row.label for row in self.rows]


class AtlasRepository(BaseRepository[AtlasTable]):
    """Reads ``atlas/<algebra>.txt`` tables."""

    FILES: Dict[str, str] = {"g3": "atlas/g3.txt", "f4": "atlas/f4.txt"}

    def keys(self) -> List[str]:
        return list(self.FILES)

    def path_for(self, key: str) -> str:
        return self.FILES[key]

    def parse(self, key: str, text: str) -> AtlasTable:
        table = AtlasTable(algebra=SuperAlgebraName.parse(key), text=text)
        for line in text.splitlines():
            if not line.strip() or line.startswith("#"):
                continue
            label, dim, depth, growth = (part.strip() for part in line.split(" | "))
            table.rows.append(AtlasRow(label, SuperDim.parse(dim), int(depth), parse_growth(growth)))
        return table

    async def get_by_algebra(self, algebra: SuperAlgebraName) -> Optional[AtlasTable]:
        return await self.get_by_id(algebra.value.lower())

    async def diff(self, algebra: SuperAlgebraName, generated: str) -> List[str]:
        """Unified diff of a generated atlas against the golden one; empty when identical."""
        golden = await self.get_by_algebra(algebra)
        expected = golden.text if golden is not None else ""
        return list(difflib.unified_diff(
            expected.splitlines(),
            generated.splitlines(),
            fromfile=f"golden/{algebra.value.lower()}",
            tofile="generated",
            lineterm="",
        ))

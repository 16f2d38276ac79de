"""Vector-field and generating-function fixtures.

File layout::

    # comment
    coordinates = x1 x2 | xi1 xi2
    key = value
    [section value]
    label = expression
"""

from __future__ import annotations
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

from repositories.base import BaseRepository
from utils.field_parser import FieldParseError, FieldParser
from utils.superpoly import CoordinateSystem, SuperPolynomial, SuperVectorField


@dataclass
class FixtureSection:
    name: str
    value: int
    entries: List[Tuple[str, str]] = field(default_factory=list)


@dataclass
class FieldFixture:
    """Expressions grouped in sections, over one coordinate system."""
    name: str
    system: CoordinateSystem
    header: Dict[str, str] = field(default_factory=dict)
    sections: List[FixtureSection] = field(default_factory=list)

    @property
    def labels(self) -> List[str]:
        return [label for section in self.sections for label, _ in section.entries]

    def section(self, name: str) -> FixtureSection:
        for section in self.sections:
            if section.name == name:
                return section
        raise KeyError(name)

    def fields(self) -> List[Tuple[str, SuperVectorField, int]]:
        """(label, field, section value) for every entry read as a vector field."""
        parser = FieldParser(self.system)
        result = []
        for section in self.sections:
            for label, text in section.entries:
                try:
                    result.append((label, parser.parse_field(text), section.value))
                except FieldParseError as e:
                    raise FieldParseError(f"{self.name}:{label}: {e}")
        return result

    def functions(self) -> List[Tuple[str, SuperPolynomial, int]]:
        """(label, polynomial, section value) for every entry read as a polynomial."""
        parser = FieldParser(self.system)
        result = []
        for section in self.sections:
            for label, text in section.entries:
                try:
                    result.append((label, parser.parse_polynomial(text), section.value))
                except FieldParseError as e:
                    raise FieldParseError(f"{self.name}:{label}: {e}")
        return result


def parse_fixture(name: str, text: str) -> FieldFixture:
    header: Dict[str, str] = {}
    sections: List[FixtureSection] = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise FieldParseError(f"{name}:{number}: unterminated section header")
            section_name, value = line[1:-1].split()
            sections.append(FixtureSection(section_name, int(value)))
            continue
        if "=" not in line:
            raise FieldParseError(f"{name}:{number}: expected 'label = expression'")
        key, value = (part.strip() for part in line.split("=", 1))
        if sections:
            sections[-1].entries.append((key, value))
        else:
            header[key] = value

    if "coordinates" not in header:
        raise FieldParseError(f"{name}: missing coordinates line")
    even, _, odd = header["coordinates"].partition("|")
    system = CoordinateSystem(even=tuple(even.split()), odd=tuple(odd.split()))
    return FieldFixture(name=name, system=system, header=header, sections=sections)


class FieldRepository(BaseRepository[FieldFixture]):
    """Reads ``fields/<name>.txt`` fixtures."""

    FILES: Dict[str, str] = {
        "f4_fields": "fields/f4_fields.txt",
        "contact_functions": "fields/contact_functions.txt",
    }

    def keys(self) -> List[str]:
        return list(self.FILES)

    def path_for(self, key: str) -> str:
        return self.FILES[key]

    def parse(self, key: str, text: str) -> FieldFixture:
        return parse_fixture(key, text)

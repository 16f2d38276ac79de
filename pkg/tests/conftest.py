"""Shared fixtures: built algebras are cached for the whole session."""

from __future__ import annotations
import asyncio
from pathlib import Path

import pytest

from models.roots import DiagramId, ParabolicId, SuperAlgebraName
from repositories.atlas_repository import AtlasRepository
from repositories.field_repository import FieldRepository
from services.algebra_builder import algebra_builder


ROOT = Path(__file__).resolve().parents[1]
DATA_DIR = ROOT / "data"

G3 = SuperAlgebraName.G3
F4 = SuperAlgebraName.F4


def parabolic(algebra: str, diagram: str, crossing: str) -> ParabolicId:
    return ParabolicId.parse(algebra, diagram, crossing)


def symbol_of(algebra: str, diagram: str, crossing: str):
    return algebra_builder.build_symbol(parabolic(algebra, diagram, crossing))


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture(scope="session")
def g3_full():
    return algebra_builder.build_full(DiagramId.parse("G3", "I"))


@pytest.fixture(scope="session")
def f4_full():
    return algebra_builder.build_full(DiagramId.parse("F4", "I"))


@pytest.fixture(scope="session")
def atlas_repository() -> AtlasRepository:
    return AtlasRepository(data_dir=DATA_DIR)


@pytest.fixture(scope="session")
def field_repository() -> FieldRepository:
    return FieldRepository(data_dir=DATA_DIR)


@pytest.fixture(scope="session")
def f4_fields(field_repository):
    return asyncio.run(field_repository.get_by_id("f4_fields"))


@pytest.fixture(scope="session")
def contact_functions(field_repository):
    return asyncio.run(field_repository.get_by_id("contact_functions"))


@pytest.fixture(scope="session")
def golden_atlas(atlas_repository):
    return {algebra: asyncio.run(atlas_repository.get_by_algebra(algebra)) for algebra in (G3, F4)}

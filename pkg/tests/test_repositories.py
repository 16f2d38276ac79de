import asyncio
import shutil

import pytest

from models.superalgebra import SuperDim
from repositories.atlas_repository import AtlasRepository
from repositories.base import MANIFEST_NAME, FixtureChecksumError
from repositories.field_repository import FieldRepository, parse_fixture
from tests.conftest import DATA_DIR, F4, G3
from utils.field_parser import FieldParseError


@pytest.fixture
def data_copy(tmp_path):
    target = tmp_path / "data"
    shutil.copytree(DATA_DIR, target)
    return target


def test_atlas_tables_parse(golden_atlas):
    g3, f4 = golden_atlas[G3], golden_atlas[F4]
    assert len(g3.rows) == 19
    assert len(f4.rows) == 55
    row = g3.row("I_1")
    assert row.dim == SuperDim(1, 7)
    assert row.depth == 2
    assert row.growth == [SuperDim(0, 7), SuperDim(1, 0)]
    assert g3.row("V_1") is None
    for table in (g3, f4):
        for row in table.rows:
            assert len(row.growth) == row.depth
            assert sum(row.growth, SuperDim()) == row.dim


def test_repository_listing(atlas_repository, field_repository):
    assert len(asyncio.run(atlas_repository.get_all())) == 2
    assert asyncio.run(field_repository.exists("f4_fields"))
    assert not asyncio.run(field_repository.exists("missing"))


def test_atlas_diff(atlas_repository, golden_atlas):
    text = golden_atlas[G3].text
    assert asyncio.run(atlas_repository.diff(G3, text)) == []
    changed = text.replace("IV_2 | (5|6)", "IV_2 | (5|7)")
    diff = asyncio.run(atlas_repository.diff(G3, changed))
    assert "-IV_2 | (5|6) | 3 | (2|4, 1|2, 2|0)" in diff
    assert "+IV_2 | (5|7) | 3 | (2|4, 1|2, 2|0)" in diff


def test_tampered_fixture_is_rejected(data_copy):
    path = data_copy / "atlas" / "g3.txt"
    path.write_text(path.read_text() + "V_9 | (0|0) | 0 | (0|0)\n")
    with pytest.raises(FixtureChecksumError):
        asyncio.run(AtlasRepository(data_dir=data_copy).get_by_algebra(G3))
    table = asyncio.run(AtlasRepository(data_dir=data_copy, verify_checksums=False).get_by_algebra(G3))
    assert table.labels[-1] == "V_9"


def test_unlisted_fixture_is_rejected(data_copy):
    manifest = data_copy / MANIFEST_NAME
    kept = [line for line in manifest.read_text().splitlines() if "f4_fields" not in line]
    manifest.write_text("\n".join(kept) + "\n")
    with pytest.raises(FixtureChecksumError):
        asyncio.run(FieldRepository(data_dir=data_copy).get_by_id("f4_fields"))


def test_missing_fixture_reads_as_none(data_copy):
    (data_copy / "atlas" / "f4.txt").unlink()
    repository = AtlasRepository(data_dir=data_copy)
    assert asyncio.run(repository.get_by_algebra(F4)) is None
    assert [table.algebra for table in asyncio.run(repository.get_all())] == [G3]


def test_field_fixture_sections(f4_fields, contact_functions):
    assert f4_fields.system.even == ("x1", "x2", "x3", "x4", "x5", "x6")
    assert f4_fields.system.odd == ("xi1", "xi2", "xi3", "xi4")
    assert [section.name for section in f4_fields.sections] == ["g-1", "g0", "g1"]
    assert f4_fields.section("g1").value == 1
    assert len(f4_fields.section("g0").entries) == 20
    assert contact_functions.labels[0] == "s0.1"
    assert len(contact_functions.section("s1").entries) == 14
    with pytest.raises(KeyError):
        f4_fields.section("g2")


def test_fixture_parse_errors():
    with pytest.raises(FieldParseError):
        parse_fixture("broken", "[g0 0]\nx = D[x1]\n")
    with pytest.raises(FieldParseError):
        parse_fixture("broken", "coordinates = x1 |\n[g0 0\n")
    with pytest.raises(FieldParseError):
        parse_fixture("broken", "coordinates = x1 |\n[g0 0]\njust text\n")


def test_bad_expression_names_its_label():
    fixture = parse_fixture("demo", "coordinates = x1 | xi1\n[g0 0]\nbad = x1 D[y9]\n")
    with pytest.raises(FieldParseError, match="demo:bad"):
        fixture.fields()

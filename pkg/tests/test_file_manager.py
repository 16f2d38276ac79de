import asyncio

from utils.file_manager import ReportFileManager


def test_path_for_case_ids(tmp_path):
    files = ReportFileManager(tmp_path)
    assert files.path_for("G3 I_13", ".json") == tmp_path / "g3_I_13.json"
    assert files.path_for("F4 VI_1234", ".json") == tmp_path / "f4_VI_1234.json"
    assert files.path_for("verify", ".json") == tmp_path / "verify.json"


def test_json_is_stable(tmp_path):
    files = ReportFileManager(tmp_path)
    target = tmp_path / "nested" / "report.json"
    asyncio.run(files.write_json(target, {"b": [1, 2], "a": "x"}))
    text = target.read_text()
    assert text == '{\n  "a": "x",\n  "b": [\n    1,\n    2\n  ]\n}\n'
    assert asyncio.run(files.read_json(target)) == {"a": "x", "b": [1, 2]}
    assert [path.name for path in target.parent.iterdir()] == ["report.json"]


def test_failed_write_leaves_target_untouched(tmp_path):
    files = ReportFileManager(tmp_path)
    target = tmp_path / "report.json"
    asyncio.run(files.write_json(target, {"ok": True}))
    try:
        asyncio.run(files.write_json(target, {"bad": object()}))
    except TypeError:
        pass
    assert asyncio.run(files.read_json(target)) == {"ok": True}
    assert [path.name for path in tmp_path.iterdir()] == ["report.json"]

import json
import subprocess
import sys

import pytest

from freeset.cli import main
from freeset.harness import fixture


@pytest.fixture
def doc(tmp_path):
    def write(name, text=None):
        p = tmp_path / f"{name}.json"
        p.write_text(text if text is not None else fixture(name).document().dumps())
        return str(p)
    return write


def _run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_validate_agraph(capsys, doc):
    code, out, _ = _run(capsys, "validate", doc("H5"))
    rep = json.loads(out)
    assert code == 0 and rep["plane"] and rep["agraph"]["f4"] == 1


def test_draw_fixture_with_trace(capsys, doc):
    code, out, _ = _run(capsys, "draw", doc("SPLIT-1"), "--rational", "--emit-trace")
    assert code == 0
    res = json.loads(out)
    assert res["meta"]["trace"]["kind"] == "Split"
    assert res["options"]["arithmetic"] == "rational"


def test_draw_hexagon_collinear(capsys, doc, tmp_path):
    obj = json.loads(fixture("HEX-1").document().dumps())
    obj["targets"] = [{"item": {"vertex": "s"}, "y": "0"}, {"item": {"vertex": "t"}, "y": "10"}]
    code, out, _ = _run(capsys, "draw", doc("hex", json.dumps(obj)), "--rational")
    assert code == 0
    ys = {v["id"]: v for v in json.loads(out)["vertices"]}
    assert (ys["t"]["x"], ys["t"]["y"]) == ("0", "10")


def test_decreasing_targets_exit_2(capsys, doc):
    obj = json.loads(fixture("HEX-1").document().dumps())
    obj["targets"] = [{"item": {"vertex": "s"}, "y": "5"}, {"item": {"vertex": "t"}, "y": "1"}]
    code, _, err = _run(capsys, "draw", doc("hex", json.dumps(obj)))
    assert code == 2 and json.loads(err)["error"] == "TARGETS_NOT_INCREASING"


def test_free_points(capsys, doc, tmp_path):
    pts = tmp_path / "pts.json"
    pts.write_text(json.dumps([[1, 1], [-1, 2]]))
    code, out, _ = _run(capsys, "free", doc("HEX-1"), "--points", str(pts), "--rational")
    assert code == 0
    assign = json.loads(out)["meta"]["assignment"]
    assert len(assign) == 2


def test_agraph_command(capsys, doc):
    code, out, _ = _run(capsys, "agraph", doc("CUBE"))
    assert code == 0 and len(json.loads(out)["edges"]) == 12


def test_gen_then_render(capsys, tmp_path):
    code, out, _ = _run(capsys, "gen", "--kind", "agraph", "--seed", "3", "--size", "20")
    assert code == 0
    p = tmp_path / "g.json"
    p.write_text(out)
    code, svg, _ = _run(capsys, "render", str(p))
    assert code == 0 and svg.startswith("<?xml")


def test_morph_writes_frames(capsys, doc, tmp_path):
    out = tmp_path / "frames"
    code, _, _ = _run(capsys, "morph", doc("H5"), "--frames", "3", "-o", str(out))
    assert code == 0
    assert sorted(p.name for p in out.iterdir()) == ["frame_0000.svg", "frame_0001.svg", "frame_0002.svg",
                                                     "frame_0003.svg", "trace.jsonl"]


def test_missing_file_exit_4(capsys, tmp_path):
    code, _, err = _run(capsys, "validate", str(tmp_path / "nope.json"))
    assert code == 4 and json.loads(err)["category"] == "io"


def test_bad_tolerance_exit_2(capsys, doc):
    code, _, err = _run(capsys, "draw", doc("OCTA-C"), "--tolerance", "bogus=1")
    assert code == 2


def test_schema_error_exit_2(capsys, doc):
    code, _, _ = _run(capsys, "validate", doc("bad", '{"vertices": 3}'))
    assert code == 2


def test_module_entry_point(tmp_path):
    p = tmp_path / "h5.json"
    p.write_text(fixture("H5").document().dumps())
    r = subprocess.run([sys.executable, "-m", "freeset", "validate", str(p)], capture_output=True, text=True)
    assert r.returncode == 0 and json.loads(r.stdout)["ok"]

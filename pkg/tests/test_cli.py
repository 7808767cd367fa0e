import json
import subprocess
import sys

import pytest

from cgclosure.cli import JobConfig, SpecError, main, parse_body, run
from cgclosure.closure import cg_closure
from cgclosure.exact import parse_scalar

TRIANGLE = {"vpolytope": {"vertices": [["0", "0"], ["3/2", "0"], ["0", "3/2"]]}}
BALL = {"ball": {"center": ["1/2", "1/2"], "radius": "1"}}
SEGMENT = {"vpolytope": {"vertices": [["0", "0"], ["1", "sqrt(2)"]]}}


def _write(tmp_path, doc, name="in.json"):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return str(p)


def _run(tmp_path, doc, *flags):
    out = tmp_path / "out.txt"
    code = main(["--input", _write(tmp_path, doc), *flags, "--out", str(out)])
    return code, out.read_text() if out.exists() else ""


def _vertex_set(payload):
    return {tuple(parse_scalar(x) for x in v) for v in payload["vrep"]}


def test_compare_triangle(tmp_path):
    code, text = _run(tmp_path, TRIANGLE, "--command", "compare")
    payload = json.loads(text)
    assert code == 0
    assert _vertex_set(payload) == {(0, 0), (1, 0), (0, 1)}
    # the axis and diagonal cuts already suffice at B=1
    assert payload["matching_bound"] == 1 and payload["verdict"] == "equal at B=1"


def test_oracle_matches_closure_on_triangle(tmp_path):
    _, closure = _run(tmp_path, TRIANGLE, "--command", "closure")
    _, oracle = _run(tmp_path, TRIANGLE, "--command", "oracle", "--bound", "2")
    assert _vertex_set(json.loads(closure)) == _vertex_set(json.loads(oracle))


def test_closure_ball_svg(tmp_path):
    code, text = _run(tmp_path, BALL, "--command", "closure", "--output", "svg")
    assert code == 0
    assert text.startswith("<svg") and "<circle" in text and "<polygon" in text


def test_closure_csv(tmp_path):
    code, text = _run(tmp_path, SEGMENT, "--command", "closure", "--output", "csv")
    assert code == 0
    assert text.splitlines() == ["x1,x2", "0,0"]


def test_normalize_vector(tmp_path):
    code, text = _run(tmp_path, {"vector": ["sqrt(2)", "sqrt(2)"]}, "--command", "normalize")
    payload = json.loads(text)
    assert code == 0
    assert (payload["t"], payload["s"], payload["r"], payload["D"]) == (1, 0, 1, 1)
    assert [parse_scalar(x) for x in payload["canonical"]][0] == 0


def test_separate_and_lift(tmp_path):
    code, text = _run(tmp_path, {"body": SEGMENT, "direction": ["-sqrt(2)", "1"]}, "--command", "separate")
    assert code == 0 and len(json.loads(text)["cut_vectors"]) <= 2
    code, text = _run(tmp_path, {"body": SEGMENT, "direction": ["1", "1"], "w": [1, 0]}, "--command", "lift")
    assert code == 0 and json.loads(text)["vacuous"] is True


def test_exit_code_parse_error(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    assert main(["--input", str(p), "--command", "closure"]) == 2
    assert "error" in capsys.readouterr().err


def test_exit_code_unknown_body(tmp_path):
    assert _run(tmp_path, {"simplex": {}}, "--command", "closure")[0] == 2


def test_exit_code_missing_file(tmp_path):
    assert main(["--input", str(tmp_path / "nope.json"), "--command", "closure"]) == 2


def test_exit_code_budget(tmp_path):
    verts = [["1/3", "0"], ["1+sqrt(2)", "1/2"], ["1", "1+sqrt(3)"], ["0", "sqrt(2)"]]
    assert _run(tmp_path, {"vpolytope": {"vertices": verts}}, "--command", "closure", "--budget", "3")[0] == 3


def test_svg_needs_two_dimensions(tmp_path):
    body = {"vpolytope": {"vertices": [["0", "0", "0"], ["1", "0", "0"]]}}
    assert _run(tmp_path, body, "--command", "closure", "--output", "svg")[0] == 2


def test_job_config_validation():
    with pytest.raises(SpecError):
        JobConfig("closure", TRIANGLE, bound=0)
    with pytest.raises(SpecError):
        JobConfig("explode", TRIANGLE)


def test_parse_sliced_ball():
    K = parse_body({"sliced": {"base": {"ball": {"center": ["0", "0"], "radius": "2"}}, "halfspaces": [{"a": [1, 1], "b": "1"}]}})
    assert K.contains((0, 0)) and not K.contains((1, 1))


def test_output_is_deterministic():
    a = run(JobConfig("closure", BALL))
    b = run(JobConfig("closure", BALL))
    assert a == b


def test_vertices_round_trip():
    verts = [["1/3", "0"], ["1+sqrt(2)", "1/2"], ["1", "1+sqrt(3)"], ["0", "sqrt(2)"]]
    spec = {"vpolytope": {"vertices": verts}}
    payload = json.loads(run(JobConfig("closure", spec)))
    exact = cg_closure(parse_body(spec)).polyhedron.vertices
    parsed = [tuple(parse_scalar(x).to_fraction() for x in v) for v in payload["vrep"]]
    assert parsed == list(exact)
    assert any(x.denominator > 1 for v in parsed for x in v)


def test_console_entry_point(tmp_path):
    path = _write(tmp_path, TRIANGLE)
    out = subprocess.run(
        [sys.executable, "-m", "cgclosure", "--input", path, "--command", "closure"],
        capture_output=True, text=True, check=True,
    )
    assert _vertex_set(json.loads(out.stdout)) == {(0, 0), (1, 0), (0, 1)}

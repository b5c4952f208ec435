import json
import re
import subprocess
import sys

import pytest

from aspeckit.cli import build_parser, main, run_command
from aspeckit.document import load_document, parse_document
from aspeckit.errors import DocumentError, ValidationError


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_document_two_point_fixture(fixtures_dir):
    doc = load_document(str(fixtures_dir / "qx_two_points.json"))
    assert len(doc.universe) == 2


def test_document_validation_names_relation(fixtures_dir):
    with pytest.raises(ValidationError) as err:
        load_document(str(fixtures_dir / "bad_commutator.json"))
    assert "x*y - y*x" in str(err.value)
    assert err.value.failures == {"B": ["x*y - y*x"]}


def test_document_dangling_name(fixtures_dir):
    with pytest.raises(DocumentError, match="unresolved name"):
        load_document(str(fixtures_dir / "dangling_name.json"))


@pytest.mark.parametrize("text, message", [
    ("{", "invalid JSON"),
    ("[]", "JSON object"),
    ('{"algebra": {"generators": ["x"]}}', "field"),
    ('{"field": "QQ", "algebra": {"generators": ["x"]}, "modules": {"A": {"x": [["1", "2"]]}}}', "square"),
    ('{"field": "QQ", "algebra": {"generators": ["x"]}, "modules": {"A": {"y": [["1"]]}}}', "unknown generator"),
    ('{"field": "QQ", "algebra": {"generators": ["x"]}, "modules": {"A": {"x": [["1/0"]]}}}', "zero denominator"),
    ('{"field": "GF(4)", "algebra": {"generators": ["x"]}}', "not prime"),
])
def test_document_errors(text, message):
    with pytest.raises(DocumentError, match=message):
        parse_document(text)


def test_ext_payload(fixtures_dir, capsys):
    code, out, _ = run(capsys, "--input", str(fixtures_dir / "qxy_points.json"), "--format", "json", "ext", "M00", "M00")
    assert code == 0
    assert json.loads(out)["result"]["dim"] == 2


def test_quiver_dot(fixtures_dir, capsys):
    code, out, _ = run(capsys, "quiver", "--input", str(fixtures_dir / "qxy_points.json"), "--format", "dot")
    assert code == 0 and out.startswith("digraph")
    loops = re.findall(r'"(\w+)" -> "(\w+)" \[label="(\d+)"\]', out)
    assert loops == [("M00", "M00", "2"), ("M12", "M12", "2")]


def test_simple_then_kpoints(fixtures_dir, capsys):
    path = str(fixtures_dir / "gaussian_line.json")
    code, out, _ = run(capsys, "-i", path, "-f", "json", "simple", "Mi")
    assert code == 0 and json.loads(out)["result"]["status"] == "simple"
    code, out, _ = run(capsys, "-i", path, "-f", "json", "kpoints")
    result = json.loads(out)["result"]
    assert code == 0 and result["points"] == ["Mm1", "M0"]
    assert result["verdicts"]["Mi"]["k_point"] == "no"


def test_topology_and_closure(fixtures_dir, capsys):
    path = str(fixtures_dir / "qx_three_points.json")
    _, out, _ = run(capsys, "-i", path, "-f", "json", "topology")
    assert json.loads(out)["result"]["count"] == 5
    _, out, _ = run(capsys, "-i", path, "-f", "json", "closure", "P0")
    assert json.loads(out)["result"]["closure"] == ["P0"]
    code, out, _ = run(capsys, "-i", path, "-f", "dot", "topology")
    assert code == 0 and out.startswith("digraph topology")


def test_section_commands(fixtures_dir, capsys):
    path = str(fixtures_dir / "qx_three_points.json")
    _, out, _ = run(capsys, "-i", path, "-f", "json", "zlocus", "a")
    assert json.loads(out)["result"]["points"] == ["P0", "P1"]
    _, out, _ = run(capsys, "-i", path, "-f", "json", "sections", "P0,P1")
    assert json.loads(out)["result"]["dim"] == 2
    _, out, _ = run(capsys, "-i", path, "-f", "json", "limit", "P0,P1;P0;P1")
    res = json.loads(out)["result"]
    assert res["dim"] == res["top_projection_rank"] == 2
    _, out, _ = run(capsys, "-i", path, "-f", "json", "sheafcheck", "all", "--cover", "P2", "P0,P2", "P1,P2")
    assert json.loads(out)["result"]["ok"] is True
    _, out, _ = run(capsys, "-i", path, "-f", "json", "restrict", "P0", "P1")
    assert json.loads(out)["result"]["global_sections_dim"] == 2
    _, out, _ = run(capsys, "-i", path, "-f", "json", "contract", "eval", "P1")
    res = json.loads(out)
    assert res["args"] == ["eval", "P1"] and res["result"]["action"] == {"t": [["1"]]}


def test_base_change_commands(fixtures_dir, capsys):
    path = str(fixtures_dir / "companion_qq.json")
    _, out, _ = run(capsys, "-i", path, "-f", "json", "complexify", "C")
    assert json.loads(out)["result"]["field"] == "QQ(i)"
    gpath = str(fixtures_dir / "gaussian_line.json")
    _, out, _ = run(capsys, "-i", gpath, "-f", "json", "realify", "Mi")
    assert json.loads(out)["result"]["action"]["x"] == [["0", "-1"], ["1", "0"]]
    _, out, _ = run(capsys, "-i", gpath, "-f", "json", "conj", "Mi")
    assert json.loads(out)["result"]["action"]["x"] == [["-i"]]


def test_text_and_json_agree_on_numbers(fixtures_dir, capsys):
    path = str(fixtures_dir / "qx_three_points.json")
    for argv in (["ext", "P0", "P0"], ["sections", "all"], ["topology"], ["sheafcheck", "all"], ["hom", "P1", "P1"]):
        _, text, _ = run(capsys, "-i", path, *argv)
        _, js, _ = run(capsys, "-i", path, "-f", "json", *argv)
        payload = json.loads(js)["result"]
        for key, value in payload.items():
            if type(value) is int:
                assert f"{key}: {value}" in text.splitlines()


def test_json_is_byte_identical_across_processes(fixtures_dir):
    argv = [sys.executable, "-m", "aspeckit", "-i", str(fixtures_dir / "qxy_points.json"), "-f", "json", "quiver"]
    first = subprocess.run(argv, capture_output=True, check=True).stdout
    second = subprocess.run(argv, capture_output=True, check=True).stdout
    assert first == second and first


EXIT_CODE_MATRIX = [
    ("qxy_points.json", ["ext", "M00", "M12"], 0),
    ("qxy_points.json", ["validate"], 0),
    ("qxy_points.json", [], 1),
    ("qxy_points.json", ["frobnicate"], 1),
    ("qxy_points.json", ["ext", "M00"], 1),
    ("qxy_points.json", ["ext", "M00", "NOPE"], 1),
    ("qxy_points.json", ["hom", "M00", "M00", "-f", "dot"], 1),
    ("qxy_points.json", ["dlocus", "x +"], 2),
    ("qxy_points.json", ["dlocus", "w"], 2),
    ("bad_expression.json", ["validate"], 2),
    ("dangling_name.json", ["validate"], 2),
    ("missing.json", ["validate"], 2),
    ("bad_commutator.json", ["hom", "B", "B"], 3),
    ("bad_commutator.json", ["validate"], 3),
    ("companion_qq.json", ["localize", "J"], 3),
    ("qx_three_points.json", ["conj", "P0"], 3),
    ("quaternions.json", ["simple", "H"], 0),
    ("quaternions.json", ["simple", "H", "--strict"], 4),
    ("quaternions.json", ["--strict", "localize", "H"], 4),
    ("companion_qq.json", ["--strict", "simple", "C"], 0),
]


@pytest.mark.parametrize("fixture, argv, code", EXIT_CODE_MATRIX)
def test_exit_code_matrix(fixtures_dir, capsys, fixture, argv, code):
    got, _, _ = run(capsys, "--input", str(fixtures_dir / fixture), *argv)
    assert got == code


def test_missing_input_is_usage_error(capsys):
    assert main(["validate"]) == 1


def test_run_command_returns_result(fixtures_dir):
    doc = load_document(str(fixtures_dir / "qxy_points.json"))
    args = build_parser().parse_args(["ext", "M00", "M12"])
    res = run_command(doc, args)
    assert (res.command, res.args, res.payload["dim"], res.exit_code) == ("ext", ["M00", "M12"], 0, 0)
    assert res.to_text().startswith("ext M00 M12\n")

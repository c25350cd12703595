from __future__ import annotations

import json
import subprocess
import sys

import pytest

from plog import frame_io
from plog.cli import run
from plog.formula import Not, box_normalize, parse_formula
from plog.jline import JLineShape, LEAF, chain, glp3_target, materialize
from plog.kripke import FiniteFrame, eval_at


def call(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def call_json(capsys, *argv):
    code, out, err = call(capsys, *argv, "--json")
    return code, json.loads(out) if out else None


# -- commands --------------------------------------------------------------------------


def test_decide_linearity_axiom(capsys):
    code, out, _ = call(capsys, "decide", "--logic", "glp3", "[0]([0]p->q) | [0]([0]q&q->p)")
    assert code == 0 and out.splitlines()[0] == "theorem"


def test_decide_closed_refuted(capsys):
    code, doc = call_json(capsys, "decide", "--logic", "glp-closed", "<0>T")
    assert code == 1 and doc["status"] == "refuted" and doc["witness"] == "()"


def test_decide_closed_theorem(capsys):
    code, doc = call_json(capsys, "decide", "--logic", "glp-closed", "[0]F -> [1]F")
    assert code == 0 and doc == {"status": "theorem", "witness": None, "countermodel": None}


def test_axis_formula(capsys):
    code, out, _ = call(capsys, "axis-formula", "w")
    assert code == 0 and out == "<1>T & [0]~<1>T\n"


def test_jlin_labels(capsys):
    code, out, _ = call(capsys, "decide", "--logic", "jlin", "<0>p & <0>~p")
    assert code == 1 and out.startswith("satisfiable")
    code, out, _ = call(capsys, "decide", "--logic", "jlin", "[0]F & <0>T")
    assert code == 0 and out.startswith("unsatisfiable")


def test_inconclusive_exit(capsys, monkeypatch):
    monkeypatch.setenv("PLOG_CAP", "3")
    code, doc = call_json(capsys, "decide", "[0]([0]p->q) | [0]([0]q&q->p)")
    assert code == 3 and doc["status"] == "inconclusive" and doc["countermodel"] is None
    code, _, _ = call(capsys, "decide", "--cap", "0", "p")
    assert code == 2


def test_usage_errors(capsys):
    assert call(capsys, "decide", "p &")[0] == 2
    assert call(capsys, "decide", "--logic", "glp-closed", "p")[0] == 2
    assert call(capsys, "bogus")[0] == 2
    assert call(capsys, "decide", "--n", "1", "[1]p")[0] == 2
    assert call(capsys, "worm", "to-ordinal", "[0]T")[0] == 2


def test_parse_and_truthset(capsys):
    code, doc = call_json(capsys, "parse", "<0>T & ~F")
    assert code == 0 and doc["formula"] == "<0>T & ~F" and doc["signature"] == 1 and doc["closed"]
    code, out, _ = call(capsys, "truthset", "<0><1>T")
    assert code == 0 and out == "x0 in [w+1,∞)\n"
    code, doc = call_json(capsys, "truthset", "F")
    assert doc["status"] == "empty" and doc["axis_witness"] is None


def test_worm_both_ways(capsys):
    assert call(capsys, "worm", "from-ordinal", "w*2")[1] == "<1><0><1>T\n"
    assert call(capsys, "worm", "to-ordinal", "<1><0><1>T")[1] == "w*2\n"


def test_enumerate(capsys, tmp_path):
    dot = tmp_path / "last.dot"
    code, doc = call_json(capsys, "enumerate", "--n", "2", "--max-size", "3", "--dot", str(dot))
    assert code == 0 and doc["count"] == 1 + 2 + 4
    assert dot.read_text().startswith("digraph")


def test_cover_k(capsys):
    assert call(capsys, "cover-k", "[1]F & <0>T", "--n", "2")[1] == "1\n"


# -- frames --------------------------------------------------------------------------


def test_check_frame_and_bad_rel(capsys, tmp_path):
    good = tmp_path / "good.json"
    frame_io.save(good, materialize(chain(3)), {"p": frozenset({"2"})}, "0")
    code, doc = call_json(capsys, "check-frame", str(good), "--formula", "<0>p")
    assert code == 0 and doc["status"] == "valid" and doc["root"] == "0" and doc["extension"] == ["0", "1"]
    fork = tmp_path / "fork.json"
    fork.write_text(json.dumps({"n": 1, "worlds": ["a", "b", "c"], "rel": {"0": [["a", "b"], ["a", "c"]]}}))
    code, doc = call_json(capsys, "check-frame", str(fork))
    assert code == 1 and doc["status"] == "invalid"
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"n": 1, "worlds": ["a"], "rel": {"0": [["a", "a"], "oops"]}}))
    code, _, err = call(capsys, "check-frame", str(bad))
    assert code == 2 and "/rel/0/1" in err


def test_project_command(capsys, tmp_path):
    path = tmp_path / "pair.json"
    doc = {"n": 2, "worlds": ["r", "s"], "rel": {"0": [], "1": [["r", "s"]]}, "val": {"p": ["s"]}}
    path.write_text(json.dumps(doc))
    code, out = call_json(capsys, "project", "--frame", str(path), "--point", "(w, 1)", "--substitute", "<1>p")
    assert code == 0 and out["iota"] == "w"
    assert out["point"] == {"point": "(w, 1)", "world": "r"}
    assert set(out["defs"]) == {"r", "s"} and out["witness"]


def test_countermodel_file_revalidates(capsys, tmp_path):
    cm_path, dot_path = tmp_path / "cm.json", tmp_path / "cm.dot"
    text = "[0](p -> <1>q) -> <0>[1]p"
    code, _, _ = call(capsys, "decide", text, "--countermodel", str(cm_path), "--dot", str(dot_path))
    assert code == 1
    frame, val, root = frame_io.load(cm_path)
    target, _ = glp3_target(parse_formula(text))
    assert eval_at(frame, val, root, target)
    assert not eval_at(frame, val, root, box_normalize(parse_formula(text)))
    assert "doublecircle" in dot_path.read_text()


def test_identical_argv_gives_identical_output():
    argv = [sys.executable, "-m", "plog", "decide", "--json", "[0](p -> [1]q) -> <0>[0]p"]
    a = subprocess.run(argv, capture_output=True, text=True)
    b = subprocess.run(argv, capture_output=True, text=True)
    assert a.returncode == b.returncode == 1
    assert a.stdout == b.stdout and a.stdout


# -- frame_io -----------------------------------------------------------------------


def test_frame_round_trip(tmp_path):
    shape = JLineShape((JLineShape((LEAF, LEAF)), JLineShape((LEAF,))))
    frame = materialize(shape)
    val = {"p": frozenset({"0.1"}), "q": frozenset()}
    path = tmp_path / "f.json"
    frame_io.save(path, frame, val, "0.0")
    assert frame_io.load(path) == (frame, val, "0.0")


def test_dot_has_one_edge_per_pair():
    frame = materialize(chain(3))
    dot = frame_io.dot_export(frame, "0")
    assert dot.count("->") == len(frame.rel[0]) == 3
    assert '"0" -> "2" [label="0"]' in dot


@pytest.mark.parametrize(
    "doc, pointer",
    [
        ({"n": 1, "worlds": ["a"], "rel": {"0": [["a", "b"]]}}, "/rel/0/0/1"),
        ({"n": 1, "worlds": ["a"], "rel": {"1": []}}, "/rel/1"),
        ({"n": 1, "worlds": ["a"], "rel": {}, "val": {"p": ["z"]}}, "/val/p/0"),
        ({"n": 1, "worlds": ["a"], "rel": {}, "root": "z"}, "/root"),
        ({"n": 1, "worlds": ["a"]}, ""),
        ({"n": 1, "worlds": ["a"], "rel": {"0": [["a"]]}}, "/rel/0/0"),
    ],
)
def test_frame_errors_carry_pointers(doc, pointer):
    with pytest.raises(frame_io.FrameFormatError) as info:
        frame_io.frame_from_json(doc)
    assert info.value.pointer == pointer


def test_invalid_json_file(tmp_path):
    path = tmp_path / "x.json"
    path.write_text("{")
    with pytest.raises(frame_io.FrameFormatError):
        frame_io.load(path)

import io
import json
import random
import subprocess
import sys
from pathlib import Path

import pytest

from septree import cli, fixtures
from septree.errors import InvariantViolation

DATA = Path(__file__).resolve().parent.parent / "data" / "graphs"


def run(argv):
    out = io.StringIO()
    code = cli.run(argv, out=out)
    return code, out.getvalue()


def main(argv, capsys):
    code = cli.main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def write_graph(tmp_path, g, name="g.json"):
    path = tmp_path / name
    path.write_text(json.dumps(g.to_json()))
    return str(path)


def test_blocks_on_path():
    code, text = run(["blocks", "--k", "2", str(DATA / "p3.json")])
    assert code == 0
    assert json.loads(text) == [["a", "b"], ["b", "c"]]


def test_blocks_from_edge_list():
    code, text = run(["blocks", "--k", "2", str(DATA / "p3.txt")])
    assert code == 0 and json.loads(text) == [["0", "1"], ["1", "2"]]


def test_empty_block_list(tmp_path):
    code, text = run(["blocks", "--k", "3", write_graph(tmp_path, fixtures.path3())])
    assert code == 0 and json.loads(text) == []


def test_profiles_command():
    code, text = run(["profiles", "--k", "2", str(DATA / "tb.json")])
    doc = json.loads(text)
    assert code == 0 and len(doc) == 7
    assert all(p["kind"] == "block" for p in doc)
    code, text = run(["profiles", "--k", "2", "--profiles", "tangles", str(DATA / "tb.json")])
    assert all(p["tangle"] for p in json.loads(text))


def test_decompose_three_blobs():
    code, text = run(["decompose", "--k", "2", "--strategy", "|ext_r;|ext_r", str(DATA / "tb.json")])
    doc = json.loads(text)
    assert code == 0
    assert len(doc["nodes"]) == 7 and len(doc["edges"]) == 6
    assert all(len(e["adhesion"]) == 1 for e in doc["edges"])


def test_decompose_dot():
    code, text = run(["decompose", "--k", "2", "--format", "dot", str(DATA / "tb.json")])
    assert code == 0
    assert text.startswith("graph decomposition {")
    assert text.count(" -- ") == 6 and '[label="p"]' in text
    code, text = run(["decompose", "--k", "3", "--format", "dot", str(DATA / "k4.json")])
    assert text.count("[label=") == 1


def test_verify_round_trip(tmp_path):
    _, text = run(["decompose", "--k", "2", str(DATA / "tb.json")])
    dec = tmp_path / "dec.json"
    dec.write_text(text)
    code, text = run(["verify", "--decomposition", str(dec), str(DATA / "tb.json")])
    report = json.loads(text)
    assert code == 0 and report["ok"] and report["adhesion"] == 1


def test_verify_failure_exit_code(tmp_path, capsys):
    dec = tmp_path / "bad.json"
    dec.write_text(json.dumps({"nodes": [{"id": 0, "part": ["a"]}, {"id": 1, "part": ["b", "c"]}],
                               "edges": [{"u": 0, "v": 1}]}))
    code, out, _ = main(["verify", "--decomposition", str(dec), str(DATA / "p3.json")], capsys)
    assert code == cli.EXIT_VERIFY
    assert json.loads(out)["T2"] is False


def test_canon_check():
    code, text = run(["canon-check", "--k", "2", str(DATA / "tb.json")])
    doc = json.loads(text)
    assert code == 0 and doc["invariant"] and doc["automorphisms"] == 6912


@pytest.mark.parametrize("argv, expected", [
    (["blocks", str(DATA / "p3.json")], cli.EXIT_USAGE),
    (["nonsense", str(DATA / "p3.json")], cli.EXIT_USAGE),
    (["blocks", "--k", "0", str(DATA / "p3.json")], cli.EXIT_USAGE),
    (["decompose", "--k", "2", "--strategy", "|ext", str(DATA / "p3.json")], cli.EXIT_USAGE),
    (["profiles", "--k", "2", "--format", "dot", str(DATA / "p3.json")], cli.EXIT_USAGE),
    (["blocks", "--k", "2", "/nonexistent/graph.txt"], cli.EXIT_PARSE),
    (["blocks", "--k", "2", "--max-vertices", "4", str(DATA / "tb.json")], cli.EXIT_RESOURCE),
    (["profiles", "--k", "2", "--max-pairs", "2", str(DATA / "tb.json")], cli.EXIT_RESOURCE),
])
def test_exit_codes(argv, expected, capsys):
    code, _, err = main(argv, capsys)
    assert code == expected
    assert err.startswith("septree:")


def test_parse_error_names_line(tmp_path, capsys):
    path = tmp_path / "bad.txt"
    path.write_text("3 2\n0 1\n0 7\n")
    code, _, err = main(["blocks", "--k", "2", str(path)], capsys)
    assert code == cli.EXIT_PARSE and "line 3" in err


def test_internal_violation_exit_code(monkeypatch, capsys):
    def broken(*args, **kwargs):
        raise InvariantViolation("boom")
    monkeypatch.setattr(cli, "build_from_nested", broken)
    code, _, err = main(["decompose", "--k", "2", str(DATA / "p3.json")], capsys)
    assert code == cli.EXIT_INTERNAL and "boom" in err


def test_emit_rejects_dot_for_lists():
    with pytest.raises(cli.UsageError):
        cli.emit([], "dot")
    assert cli.emit([]) == "[]\n"


def test_output_is_deterministic():
    argv = ["decompose", "--k", "2", "--strategy", "|loc_r", str(DATA / "tb.json")]
    assert run(argv) == run(argv)


def test_relabelling_changes_nothing_but_names(tmp_path):
    g = fixtures.three_blobs()
    perm = list(range(g.n))
    random.Random(61).shuffle(perm)
    h = g.relabel(perm)
    for cmd in (["blocks"], ["decompose"]):
        _, a = run(cmd + ["--k", "2", write_graph(tmp_path, g, "a.json")])
        _, b = run(cmd + ["--k", "2", write_graph(tmp_path, h, "b.json")])
        da, db = json.loads(a), json.loads(b)
        if cmd == ["blocks"]:
            assert sorted(map(sorted, da)) == sorted(map(sorted, db))
        else:
            assert sorted(sorted(n["part"]) for n in da["nodes"]) == sorted(sorted(n["part"]) for n in db["nodes"])
            assert sorted(sorted(e["adhesion"]) for e in da["edges"]) == sorted(sorted(e["adhesion"]) for e in db["edges"])


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "septree.cli", "blocks", "--k", "2", str(DATA / "p3.json")],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and json.loads(proc.stdout) == [["a", "b"], ["b", "c"]]

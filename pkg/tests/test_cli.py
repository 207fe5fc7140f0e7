import csv
import json

import pytest

from subiso.cli import main


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_generate_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for f in (a, b):
        assert run(capsys, "generate", "planted", "--k", 4, "--n", 5, "--seed", 9, "-o", f)[0] == 0
    assert a.read_bytes() == b.read_bytes()
    meta = json.loads(a.read_text())["metadata"]
    assert meta["generator"] == "planted" and meta["seed"] == 9


def test_solve_yes_with_witness(tmp_path, capsys):
    f = tmp_path / "i.json"
    run(capsys, "generate", "planted", "--k", 4, "--n", 5, "--seed", 1, "-o", f)
    code, out, err = run(capsys, "solve", f, "--witness")
    assert code == 0 and out.splitlines()[0] == "YES"
    assert "witness" in json.loads(out.splitlines()[1])
    assert "algo:" in err
    assert run(capsys, "oracle", f)[0] == 0


def test_solve_no(tmp_path, capsys):
    f = tmp_path / "i.json"
    run(capsys, "generate", "planted", "--k", 4, "--n", 3, "--p", 0.0, "--no-plant",
        "--seed", 1, "-o", f)
    code, out, _ = run(capsys, "solve", f)
    assert code == 1 and out.strip() == "NO"


def test_weighted_and_uncolored(tmp_path, capsys):
    f = tmp_path / "w.json"
    run(capsys, "generate", "planted", "--k", 3, "--n", 3, "--weights", "edge", "--seed", 2, "-o", f)
    assert run(capsys, "solve", f)[0] == run(capsys, "oracle", f)[0]
    u = tmp_path / "u.json"
    run(capsys, "generate", "uncolored", "--k", 3, "--n", 7, "--seed", 2, "-o", u)
    assert run(capsys, "solve", u, "--mode", "exhaustive")[0] == run(capsys, "oracle", u)[0]


def test_reduce_and_hypergraph(tmp_path, capsys):
    hg = tmp_path / "h.json"
    run(capsys, "generate", "hypergraph", "--h", 2, "--classes", 4, "--size", 2, "--planted",
        "--seed", 3, "-o", hg)
    assert run(capsys, "solve", hg)[0] == 0
    red = tmp_path / "r.json"
    assert run(capsys, "reduce", hg, "--to", "ew-colored", "-o", red)[0] == 0
    assert run(capsys, "oracle", red)[0] == 0
    ss = tmp_path / "s.json"
    assert run(capsys, "reduce", hg, "--to", "subset-sum", "-o", ss)[0] == 0
    assert run(capsys, "solve", ss)[0] == 0


def test_errors_exit_two(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    code, _, err = run(capsys, "solve", bad)
    assert code == 2 and err.startswith("error:")
    assert run(capsys, "solve", tmp_path / "missing.json")[0] == 2
    assert run(capsys, "generate", "twl", "--h", 1, "--s1", 0, "--s2", 1)[0] == 2


def test_bench_outputs(tmp_path, capsys):
    code, out, _ = run(capsys, "bench", "--suite", "tree", "--sizes", "16,32", "--repeats", 1,
                       "--out-dir", tmp_path)
    assert code == 0
    summary = json.loads(out)
    assert summary["sizes"] == [16, 32] and "slope" in summary
    rows = list(csv.reader(open(tmp_path / "bench_tree.csv")))
    assert rows[0] == ["suite", "pattern", "n", "repeat", "seconds", "verdict"]
    assert len(rows) == 3
    assert (tmp_path / "bench_tree.png").stat().st_size > 0

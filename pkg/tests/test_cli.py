import csv
import io
import json

import pytest

from gedsearch import costs
from gedsearch.cli import EXIT_ABORTED, EXIT_DATA, EXIT_OK, EXIT_USAGE, main
from gedsearch.instances import worked_example_pair
from gedsearch.io import write_native


@pytest.fixture
def pair(tmp_path):
    g, h = worked_example_pair()
    (tmp_path / "g.json").write_bytes(write_native(g))
    (tmp_path / "h.json").write_bytes(write_native(h))
    return str(tmp_path / "g.json"), str(tmp_path / "h.json")


@pytest.fixture
def synth(tmp_path, capsys):
    assert main(["--seed", "5", "synth", "--out", str(tmp_path / "s"), "--size", "8",
                 "--queries", "2"]) == EXIT_OK
    return json.loads(capsys.readouterr().out)


def test_bound(pair, capsys):
    assert main(["bound", *pair, "--alg", "forilp", "--exact"]) == EXIT_OK
    out = json.loads(capsys.readouterr().out)
    assert out["value"] == 5 and out["exact"] == "5"
    assert out["certificate"]["dual_objective"] == 5
    assert main(["bound", *pair, "--alg", "ls"]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["value"] == 2
    assert main(["bound", *pair, "--alg", "forilp", "--anchor", "0:0"]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["value"] == pytest.approx(6)


def test_ged(pair, capsys, tmp_path):
    lp = tmp_path / "m.lp"
    assert main(["ged", *pair, "--dump-lp", str(lp)]) == EXIT_OK
    out = json.loads(capsys.readouterr().out)
    assert out["ged"] == 5 and out["status"] == "optimal"
    assert sum(op["cost"] for op in out["edit_path"]) == 5
    assert lp.read_text().startswith("\\")
    assert main(["ged", *pair, "--oracle"]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["ged"] == 5
    assert main(["ged", *pair, "--formulation", "f1"]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["ged"] == 5


def test_usage_errors(pair, capsys):
    with pytest.raises(SystemExit) as exc:
        main(["bound", *pair])
    assert exc.value.code == EXIT_USAGE
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == EXIT_USAGE
    assert main(["bound", *pair, "--alg", "ls", "--costs", "aids-muta"]) == EXIT_USAGE
    assert main(["bound", *pair, "--alg", "bm", "--exact"]) == EXIT_USAGE
    assert main(["bound", *pair, "--alg", "forilp", "--anchor", "x"]) == EXIT_USAGE


def test_data_errors(tmp_path, pair, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"nodes": [{"id": 0}]}')
    assert main(["bound", str(bad), pair[1], "--alg", "bm"]) == EXIT_DATA
    assert main(["bound", str(tmp_path / "nope.json"), pair[1], "--alg", "bm"]) == EXIT_DATA
    assert "data error" in capsys.readouterr().err


def test_search_reproducible(synth, tmp_path, capsys):
    q = synth["queries"][0]
    outs = []
    for run in range(2):
        js, cs = tmp_path / f"r{run}.json", tmp_path / f"r{run}.csv"
        code = main(["--seed", "1", "search", "--query", q, "--dataset", synth["dataset"],
                     "--tau", "3", "--jobs", "1", "--out", str(js), "--csv", str(cs)])
        assert code == EXIT_OK
        outs.append((js.read_bytes(), cs.read_bytes()))
    assert outs[0] == outs[1]
    report = json.loads(outs[0][0])
    assert report["elapsed_ms"] is None
    assert report["dataset_size"] == 8
    rows = list(csv.DictReader(io.StringIO(outs[0][1].decode())))
    assert len(rows) == 8 and all(r["elapsed_ms"] == "" for r in rows)


def test_search_options(synth, capsys):
    q = synth["queries"][0]
    base = ["search", "--query", q, "--dataset", synth["dataset"], "--jobs", "1"]
    assert main([*base]) == EXIT_USAGE
    assert main([*base, "--tau", "2", "--tau-mult", "1"]) == EXIT_USAGE
    assert main([*base, "--tau-mult", "1", "--chain", "BM"]) == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert report["tau"] == 1.0 and report["filter_chain"] == ["BM"]
    assert main([*base, "--tau", "2", "--budget-ms", "0"]) == EXIT_ABORTED
    assert json.loads(capsys.readouterr().out)["coverage"] == 0.0


def test_bench_star_cycle(tmp_path, capsys):
    out = tmp_path / "sc.csv"
    assert main(["bench", "--preset", "star-cycle", "--out", str(out)]) == EXIT_OK
    rows = list(csv.DictReader(io.StringIO(out.read_text())))
    assert [int(r["n"]) for r in rows] == list(range(3, 13))
    for r in rows:
        n = int(r["n"])
        assert r["forilp"] == str(2 * n - 5) and r["bm"] == str(n - 2) and r["ok"] == "true"


def test_bench_dataset(synth, capsys):
    args = ["--seed", "0", "bench", "--dataset", synth["dataset"], "--queries", *synth["queries"],
            "--taus", "1,2,3"]
    assert main(args) == EXIT_OK
    first = capsys.readouterr().out
    rows = list(csv.DictReader(io.StringIO(first)))
    assert len(rows) == 3 * len(synth["queries"])
    assert main(args) == EXIT_OK
    assert capsys.readouterr().out == first
    with pytest.raises(SystemExit):
        main(["bench", "--taus"])
    assert main(["bench"]) == EXIT_USAGE


def test_selftest_subset(capsys):
    assert main(["selftest", "--only", "2,8"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "PASS" in out


def test_selftest_names_corrupted_constant(monkeypatch, capsys):
    monkeypatch.setitem(costs.TAU_MULTIPLIERS, "aids-muta", 3.5)
    assert main(["selftest", "--only", "8"]) != EXIT_OK
    out = capsys.readouterr().out
    assert "FAIL" in out and "tau multiplier aids" in out

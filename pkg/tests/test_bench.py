from gedsearch.bench import BENCH_COLUMNS, bench_dataset, bench_star_cycle, rows_to_csv
from gedsearch.instances import synthetic_dataset


def test_bench_rows_and_gaps():
    dataset, queries = synthetic_dataset(seed=6, size=10, n_queries=2)
    rows = bench_dataset(queries, dataset, [1, 2, 3], timings=False)
    assert len(rows) == 6
    for q in queries:
        mine = [r for r in rows if r["query"] == q.name]
        assert [r["tau"] for r in mine] == [1, 2, 3]
        matches = [r["matches"] for r in mine]
        assert matches == sorted(matches)
    for r in rows:
        assert r["n_exact"] == 10
        assert r["mean_gap_ls"] >= r["mean_gap_bm"] - 1e-12
        assert r["mean_gap_bm"] >= r["mean_gap_forilp"] - 1e-12
        assert r["max_gap_ls"] >= r["max_gap_forilp"] - 1e-12
        assert r["coverage"] == 1.0
        assert r["elapsed_ms"] is None
    text = rows_to_csv(rows, BENCH_COLUMNS).decode().splitlines()
    assert text[0] == ",".join(BENCH_COLUMNS)
    assert len(text) == 7


def test_bench_weighted_has_no_ls():
    dataset, queries = synthetic_dataset(seed=6, size=4, n_queries=1)
    rows = bench_dataset(queries, dataset, [5.5], "aids-muta")
    assert rows[0]["mean_gap_ls"] is None
    assert rows[0]["mean_gap_bm"] >= rows[0]["mean_gap_forilp"] - 1e-12


def test_star_cycle_table():
    rows = bench_star_cycle(range(3, 9), exact=False)
    assert all(r["ok"] for r in rows)
    assert [r["K"] for r in rows] == [4 * n - 1 for n in range(3, 9)]

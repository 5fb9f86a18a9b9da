"""Acceptance criteria, one test per criterion.

Each test prints a PASS/FAIL/SKIP line; the lines are repeated in the
terminal summary.  Also runnable directly: ``python tests/test_acceptance.py``.
"""
import sys

import pytest

from gedsearch.acceptance import CHECKS, run_all, run_check

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # run as a script
    ACCEPTANCE_LINES = []


@pytest.mark.parametrize("number", [num for num, _, _ in CHECKS],
                         ids=[title.replace(" ", "_").replace("/", "_") for _, title, _ in CHECKS])
def test_criterion(number):
    res = run_check(number, seed=0)
    line = res.line()
    print(line)
    ACCEPTANCE_LINES.append(line)
    if res.status == "SKIP":
        pytest.skip(res.detail)
    assert res.status == "PASS", line


if __name__ == "__main__":
    results = run_all(0)
    sys.exit(0 if all(r.ok for r in results) else 1)


def _write_gxl(path, g):
    nodes = "".join(f'<node id="_{v}"><attr name="symbol"><string>{g.node_labels[v]}</string></attr></node>'
                    for v in g.nodes)
    edges = "".join(f'<edge from="_{i}" to="_{j}"><attr name="valence"><int>{lab}</int></attr></edge>'
                    for (i, j), lab in zip(g.edges, g.edge_labels))
    path.write_text(f'<gxl><graph id="{path.stem}" edgemode="undirected">{nodes}{edges}</graph></gxl>')


def test_scale_check_runs_on_local_sample(tmp_path, monkeypatch):
    # runs the data-dependent check on a molecule-like sample; coverage must be
    # complete, while per-stage discard counts only mean something on real data
    from gedsearch.acceptance import check_scale
    from gedsearch.instances import synthetic_dataset

    dataset, _ = synthetic_dataset(seed=9, size=100, n_queries=1, node_alphabet=("C", "O", "N"),
                                   edge_alphabet=(1, 2))
    (tmp_path / "AIDS").mkdir()
    for gid, g in dataset:
        _write_gxl(tmp_path / "AIDS" / f"{gid}.gxl", g)
    monkeypatch.setenv("GEDSEARCH_DATA_DIR", str(tmp_path))
    ok, detail = check_scale(0)
    print(detail)
    assert "coverage" not in detail, detail

import numpy as np
import pytest
from hypothesis import given, settings

from conftest import graphs
from gedsearch.bb import ilp_solve
from gedsearch.bounds import bm_bound, bm_lift
from gedsearch.costs import aids_muta_costs, unit_costs
from gedsearch.graph import build_graph, random_graph, star_cycle_instance
from gedsearch.instances import worked_example_pair
from gedsearch.lp import lp_solve
from gedsearch.model import (ThresholdedModel, add_threshold, build_bm_polytope, build_f1, build_fori,
                             reduced_costs, write_lp)
from gedsearch.oracle import brute_force_ged_ticks


def test_reduced_costs_examples():
    for n in (3, 6, 9):
        s, c = star_cycle_instance(n)
        assert reduced_costs(s, c, unit_costs()).K == 4 * n - 1
    g, h = worked_example_pair()
    assert reduced_costs(g, h, unit_costs()).K == 18
    a = build_graph(1, ["A"])
    assert reduced_costs(a, a, unit_costs()).node[0, 0] == -2


def test_fori_dimensions_worked_example():
    g, h = worked_example_pair()
    m = build_fori(g, h, unit_costs())
    assert m.count("node_map") == 20
    assert m.count("arc_map") == 40


def test_fori_dimensions_random(rng):
    for _ in range(50):
        g = random_graph(rng, int(rng.integers(1, 7)))
        h = random_graph(rng, int(rng.integers(1, 7)))
        m = build_fori(g, h, unit_costs())
        assert m.count("node_map") == g.n * h.n
        assert m.count("arc_map") == g.m * 2 * h.m
        assert len(m.rows_tagged("assign_g")) + len(m.rows_tagged("assign_h")) == g.n + h.n
        assert len(m.rows_tagged("tail")) + len(m.rows_tagged("head")) == 2 * h.n * g.m
        assert len(m.rows_tagged("node_arc")) == g.n * 2 * h.m
        assert all(v <= 0 for v in m.objective)
        assert m.constant >= 0


def test_worked_example_optima():
    g, h = worked_example_pair()
    c = unit_costs()
    assert ilp_solve(build_fori(g, h, c)).objective == 5
    assert ilp_solve(build_f1(g, h, c)).objective == 5


def test_identical_graphs_zero(rng):
    g = random_graph(rng, 5, 6, ("A", "B"), ("-", "="))
    for build in (build_fori, build_f1):
        assert ilp_solve(build(g, g, unit_costs())).objective == 0


def test_threshold_row():
    g, h = worked_example_pair()
    m = build_fori(g, h, unit_costs())
    t = add_threshold(m, 4)
    assert isinstance(t, ThresholdedModel)
    assert t.n_rows == m.n_rows + 1
    assert t.rows[-1].tag == ("threshold",)
    assert ilp_solve(t, "feasibility").status.value == "infeasible"
    assert ilp_solve(add_threshold(m, 5), "feasibility").status.value == "feasible"
    k = reduced_costs(g, h, unit_costs()).K
    empty = [0] * m.n_vars
    assert add_threshold(m, k).is_feasible(empty)
    # re-thresholding replaces rather than stacks
    assert add_threshold(t, 6).n_rows == t.n_rows


def test_threshold_is_exact_for_scaled_costs():
    c = aids_muta_costs()
    g = build_graph(1, ["C"])
    h = build_graph(1, ["N"])
    m = build_fori(g, h, c)
    # GED is 5.5 (relabel); 5.5 - 1/40 must be infeasible
    assert ilp_solve(add_threshold(m, 5.5), "feasibility").status.value == "feasible"
    assert ilp_solve(add_threshold(m, 5.475), "feasibility").status.value == "infeasible"


@settings(max_examples=25)
@given(graphs(max_nodes=5), graphs(max_nodes=5))
def test_fori_f1_and_oracle_agree(g, h):
    c = unit_costs()
    ged = brute_force_ged_ticks(g, h, c)[0]
    assert ilp_solve(build_fori(g, h, c)).ticks == ged
    assert ilp_solve(build_f1(g, h, c)).ticks == ged


@settings(max_examples=25)
@given(graphs(max_nodes=5), graphs(max_nodes=5))
def test_lp_containment_chain(g, h):
    c = unit_costs()
    fori = lp_solve(build_fori(g, h, c)).objective
    f1 = lp_solve(build_f1(g, h, c)).objective
    bmp = lp_solve(build_bm_polytope(g, h, c)).objective
    bm = float(bm_bound(g, h, c).ticks)
    assert fori >= f1 - 1e-9
    assert f1 >= bmp - 1e-9
    assert fori >= bm - 1e-9
    # the BM solution is a point of the relaxed polytope, so its LP is below BM
    m = build_bm_polytope(g, h, c)
    point = bm_lift(g, h, c, m)
    assert m.is_feasible(point)
    assert m.value(point) == bm_bound(g, h, c).exact * c.scale
    assert bmp <= bm + 1e-9


def test_relaxed_lp_can_be_below_bm():
    # a deleted endpoint lets half of an edge map for free in both relaxations
    g = build_graph(5, list("AAAAB"), [(0, 4)])
    h = build_graph(3, list("AAA"), [(0, 1), (0, 2)])
    c = unit_costs()
    bm = bm_bound(g, h, c).exact
    assert bm == 4
    assert lp_solve(build_fori(g, h, c)).objective == pytest.approx(4)
    assert lp_solve(build_f1(g, h, c)).objective == pytest.approx(3.5)
    assert lp_solve(build_bm_polytope(g, h, c)).objective == pytest.approx(3)


def test_bm_polytope_star_cycle():
    s, c5 = star_cycle_instance(5)
    c = unit_costs()
    bmp = lp_solve(build_bm_polytope(s, c5, c)).objective
    # far below both BM (3) and FORI-LP (5): only the edge count difference survives
    assert abs(bmp - 1) <= 1e-9


def test_write_lp(tmp_path):
    g, h = worked_example_pair()
    m = build_fori(g, h, unit_costs())
    text = write_lp(m, tmp_path / "m.lp")
    assert text.startswith("\\")
    for section in ("Minimize", "Subject To", "Binaries", "End"):
        assert section in text
    assert (tmp_path / "m.lp").read_text() == text
    assert text.count("<=") == m.n_rows


def test_dense_matches_rows():
    g, h = worked_example_pair()
    m = build_fori(g, h, unit_costs())
    A, b, is_eq, c = m.dense()
    x = np.zeros(m.n_vars)
    x[m.index["x", 0, 0]] = 1
    for r, row in enumerate(m.rows):
        assert A[r] @ x == row.activity(x)

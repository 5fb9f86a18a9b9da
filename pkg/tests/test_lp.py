from fractions import Fraction

import numpy as np
import pytest

from gedsearch.assignment import DimensionMismatch
from gedsearch.bounds import fixings_for
from gedsearch.costs import unit_costs
from gedsearch.graph import build_graph, random_graph, star_cycle_instance
from gedsearch.instances import star_cycle_dual, worked_example_pair
from gedsearch.lp import LpStatus, check_dual_certificate, lp_solve, simplex
from gedsearch.model import build_fori


def star_cycle_model(n):
    return build_fori(*star_cycle_instance(n), unit_costs())


def test_star_cycle_objective_and_dual():
    m = star_cycle_model(5)
    sol = lp_solve(m, exact=True)
    assert sol.optimal
    assert sol.objective == 5
    dual = star_cycle_dual(m)
    assert check_dual_certificate(m, sol.primal, dual)
    assert check_dual_certificate(m, None, dual)


def test_identical_single_nodes():
    a = build_graph(1, ["A"])
    sol = lp_solve(build_fori(a, a, unit_costs()))
    assert sol.optimal and sol.objective == pytest.approx(0)


def test_contradictory_fixings_infeasible():
    g, h = worked_example_pair()
    m = build_fori(g, h, unit_costs())
    fix = {m.index["x", 0, 1]: 1, m.index["x", 2, 1]: 1}
    sol = lp_solve(m, fix)
    assert sol.status is LpStatus.INFEASIBLE
    assert sol.farkas_row is not None
    assert lp_solve(m, fix, exact=True).status is LpStatus.INFEASIBLE


def test_rejects_bad_duals():
    m = star_cycle_model(5)
    primal = lp_solve(m, exact=True).primal
    zero = [Fraction(0)] * m.n_rows
    assert m.constant == 19
    assert not check_dual_certificate(m, primal, zero)
    dual = star_cycle_dual(m)
    bumped = list(dual)
    bumped[[r.tag[0] == "assign_g" and r.tag[1] == 0 for r in m.rows].index(True)] = Fraction(7)
    assert not check_dual_certificate(m, primal, bumped)


def test_dual_dimension_mismatch():
    m = star_cycle_model(4)
    with pytest.raises(DimensionMismatch):
        check_dual_certificate(m, None, [0] * (m.n_rows - 1))


@pytest.mark.parametrize("n", range(3, 13))
def test_star_cycle_family_exact(n):
    assert lp_solve(star_cycle_model(n), exact=True).objective == 2 * n - 5


def test_exact_mode_duality():
    g, h = worked_example_pair()
    sol = lp_solve(build_fori(g, h, unit_costs()), exact=True)
    assert sol.exact
    assert sol.objective == sol.dual_objective == 5
    assert all(isinstance(v, Fraction) for v in sol.primal)


def test_row_permutation_invariance():
    rng = np.random.default_rng(3)
    for _ in range(5):
        g = random_graph(rng, 5, 5)
        h = random_graph(rng, 5, 6)
        m = build_fori(g, h, unit_costs())
        base = lp_solve(m).objective
        order = rng.permutation(m.n_rows)
        assert lp_solve(m.permuted_rows(order)).objective == pytest.approx(base, abs=1e-9)


def test_complementary_slackness_and_feasibility():
    rng = np.random.default_rng(11)
    for _ in range(5):
        g = random_graph(rng, 5, 6)
        h = random_graph(rng, 4, 4)
        m = build_fori(g, h, unit_costs())
        sol = lp_solve(m)
        assert m.is_feasible(sol.primal, 1e-9)
        assert abs(sol.objective - sol.dual_objective) <= 1e-9
        assert np.all(sol.reduced >= -1e-9)
        assert np.all(np.abs(sol.primal * sol.reduced) <= 1e-9)


def test_fixings_raise_bound():
    g, h = worked_example_pair()
    m = build_fori(g, h, unit_costs())
    base = lp_solve(m).objective
    fixed = lp_solve(m, fixings_for(m, [(0, 0)])).objective
    assert fixed >= base - 1e-9


def test_bad_fixing_value():
    m = star_cycle_model(3)
    with pytest.raises(ValueError):
        lp_solve(m, {0: 2})


def test_simplex_small_lp():
    # min -x - y  s.t. x + y <= 1.5, x <= 1, y <= 1
    A = np.array([[1.0, 1.0]])
    res = simplex(A, np.array([1.5]), np.array([False]), np.array([-1.0, -1.0]),
                  [0, 0], [1.0, 1.0])
    assert res.status is LpStatus.OPTIMAL
    assert float(np.dot([-1, -1], res.x)) == pytest.approx(-1.5)


def test_simplex_equality_infeasible():
    A = np.array([[1.0, 1.0], [1.0, 1.0]])
    res = simplex(A, np.array([1.0, 2.0]), np.array([True, True]), np.zeros(2),
                  [0, 0], [np.inf, np.inf])
    assert res.status is LpStatus.INFEASIBLE

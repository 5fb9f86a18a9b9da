import pytest
from hypothesis import given

from conftest import graphs
from gedsearch.costs import aids_muta_costs, unit_costs
from gedsearch.graph import build_graph
from gedsearch.instances import worked_example_pair
from gedsearch.model import reduced_costs
from gedsearch.oracle import (MAX_NODES, TooLarge, brute_force_ged, brute_force_ged_ticks,
                              mapping_cost_ticks)


def test_single_relabel():
    a, b = build_graph(1, ["A"]), build_graph(1, ["B"])
    assert brute_force_ged(a, b)[0] == 1
    assert brute_force_ged(a, a)[0] == 0


def test_worked_example():
    g, h = worked_example_pair()
    value, mapping = brute_force_ged(g, h)
    assert value == 5
    assert mapping_cost_ticks(g, h, mapping, unit_costs()) == 5


@given(graphs(max_nodes=5), graphs(max_nodes=5))
def test_symmetry_and_upper_bound(g, h):
    for c in (unit_costs(), aids_muta_costs()):
        ticks, mapping = brute_force_ged_ticks(g, h, c)
        assert ticks == brute_force_ged_ticks(h, g, c)[0]
        assert ticks <= reduced_costs(g, h, c).K
        assert mapping_cost_ticks(g, h, mapping, c) == ticks


def test_empty_mapping_costs_k():
    g, h = worked_example_pair()
    c = unit_costs()
    assert mapping_cost_ticks(g, h, [None] * g.n, c) == reduced_costs(g, h, c).K == 18


def test_too_large():
    big = build_graph(MAX_NODES + 1, ["A"] * (MAX_NODES + 1))
    with pytest.raises(TooLarge):
        brute_force_ged(big, big)

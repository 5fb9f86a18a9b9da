import pytest
from hypothesis import given

from conftest import graphs
from gedsearch.graph import (DanglingEndpoint, DuplicateEdge, InvalidSize, SelfLoop, UnknownLabel,
                             UnknownNode, branch_structure, build_graph, orient, star_cycle_instance)
from gedsearch.instances import worked_example_pair


def test_single_node_graph():
    g = build_graph(1, ["C"])
    assert (g.n, g.m) == (1, 0)


def test_worked_example_shape():
    g, h = worked_example_pair()
    assert (g.n, g.m) == (5, 4)
    assert sorted(g.node_labels) == ["A", "A", "A", "B", "B"]
    assert (h.n, h.m) == (4, 5)


@pytest.mark.parametrize("edges,err", [
    ([(3, 3)], SelfLoop),
    ([(0, 1), (1, 0)], DuplicateEdge),
    ([(0, 9)], DanglingEndpoint),
])
def test_invalid_edges(edges, err):
    with pytest.raises(err):
        build_graph(4, ["A"] * 4, edges)


def test_label_outside_alphabet():
    with pytest.raises(UnknownLabel):
        build_graph(2, ["A", "Z"], [], alphabets=(["A"], ["-"]))


def test_edges_are_canonical():
    g = build_graph(3, "ABC", [(2, 0), (1, 0)], ["x", "y"])
    assert g.edges == ((0, 1), (0, 2))
    assert g.edge_label(2, 0) == "x"
    assert g.edge_label(0, 1) == "y"


def test_caller_ids_are_preserved():
    g = build_graph(["n7", "n3"], {"n7": "A", "n3": "B"}, [("n3", "n7")])
    assert g.original_ids == ("n7", "n3")
    assert g.edges == ((0, 1),)


def test_branch_structure():
    g = build_graph(2, ["A", "B"])
    assert branch_structure(g, 0).center_label == "A"
    assert branch_structure(g, 0).incident_edge_labels == ()
    s5, _ = star_cycle_instance(5)
    assert branch_structure(s5, 0).incident_edge_labels == ("e",) * 4
    g, _ = worked_example_pair()
    b = branch_structure(g, 0)
    assert (b.center_label, b.incident_edge_labels) == ("A", ("-",) * 4)
    with pytest.raises(UnknownNode):
        branch_structure(g, 17)


def test_orient():
    g = build_graph(3, "AAA", [(0, 1), (0, 2)])
    h = build_graph(2, "AA", [(0, 1)])
    arcs = orient(g, h)
    assert arcs.g_arcs == ((0, 1), (0, 2))
    assert arcs.h_arcs == ((0, 1), (1, 0))
    assert orient(g, build_graph(2, "AA")).h_arcs == ()
    s, c = star_cycle_instance(5)
    arcs = orient(s, c)
    assert (len(arcs.g_arcs), len(arcs.h_arcs)) == (4, 10)


@pytest.mark.parametrize("n", [3, 5, 8])
def test_star_cycle_sizes(n):
    s, c = star_cycle_instance(n)
    assert (s.n, c.n, s.m, c.m) == (n, n, n - 1, n)
    assert all(0 in e for e in s.edges)


def test_star_cycle_too_small():
    with pytest.raises(InvalidSize):
        star_cycle_instance(2)


@given(graphs(max_nodes=7))
def test_graph_invariants(g):
    assert sum(g.degree(v) for v in g.nodes) == 2 * g.m
    for v in g.nodes:
        assert len(branch_structure(g, v).incident_edge_labels) == g.degree(v)
    assert orient(g, g) == orient(g, g)
    assert all(i < j for i, j in g.edges)

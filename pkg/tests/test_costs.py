import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gedsearch.costs import (MatrixShape, MissingPayload, aids_muta_costs, get_cost_model, levenshtein,
                             lsape_small, protein_costs, unit_costs)


def test_unit_costs():
    c = unit_costs()
    assert c.node_subst("A", "A") == 0
    assert c.node_subst("A", "B") == 1
    assert c.edge_del("x") == 1
    assert c.is_unit and c.scale == 1


def test_aids_muta_costs():
    c = aids_muta_costs()
    assert c.node_subst("C", "N") == 5.5
    assert c.node_subst("C", "C") == 0
    assert c.node_del("C") == 2.75
    assert c.node_ins("O") == 2.75
    assert c.edge_subst(1, 2) == 1.65
    assert c.edge_ins(1) == 0.825
    assert c.edge_del(2) == 0.825
    assert not c.is_unit


def test_protein_costs():
    c = protein_costs()
    assert c.node_subst(("helix", "AA"), ("sheet", "AA")) == 16.5
    assert c.node_subst(("helix", "AA"), ("helix", "AB")) == 0.75
    assert c.node_del(("loop", "A")) == 8.25
    assert c.edge_del(("a", None)) == 0.25
    assert c.edge_del(("a", "b")) == 0.5
    assert c.edge_subst(("a", "b"), ("b", "a")) == 0


def test_protein_requires_payload():
    c = protein_costs()
    with pytest.raises(MissingPayload):
        c.node_subst("A", "B")
    with pytest.raises(MissingPayload):
        c.edge_del("x")


def test_ticks_are_exact():
    c = aids_muta_costs()
    assert c.to_ticks(3.575) == 143
    assert c.to_ticks("0.825") == 33
    assert c.to_real(143) == 3.575


def test_lookup_by_name():
    assert get_cost_model("aids-muta").scale == 40
    with pytest.raises(ValueError):
        get_cost_model("letter")


@pytest.mark.parametrize("a,b,d", [("", "abc", 3), ("a", "a", 0), ("kitten", "sitting", 3), ("abc", "", 3)])
def test_levenshtein(a, b, d):
    assert levenshtein(a, b) == d


def _lev_reference(a, b):
    # full-matrix recursion, independent of the two-row version
    D = [[0] * (len(b) + 1) for _ in range(len(a) + 1)]
    for i in range(len(a) + 1):
        for j in range(len(b) + 1):
            if i == 0 or j == 0:
                D[i][j] = i + j
            else:
                D[i][j] = min(D[i - 1][j] + 1, D[i][j - 1] + 1, D[i - 1][j - 1] + (a[i - 1] != b[j - 1]))
    return D[-1][-1]


@given(st.text("ACGT", max_size=8), st.text("ACGT", max_size=8))
def test_levenshtein_matches_reference(a, b):
    assert levenshtein(a, b) == _lev_reference(a, b) == levenshtein(b, a)


def test_lsape_small_examples():
    assert lsape_small([[0, 1], [1, 0]]) == 0
    assert lsape_small([[2, 1], [1, 0]]) == 2
    assert lsape_small([[2, 2, 1], [2, 2, 1], [1, 1, 0]]) == 4
    with pytest.raises(MatrixShape):
        lsape_small([[1, 2], [3]])


def _lsape_reference(C):
    # enumerate partial injections as sets of (row, col) pairs
    p, q = len(C) - 1, len(C[0]) - 1
    best = None
    cells = [(r, s) for r in range(p) for s in range(q)]
    for k in range(min(p, q) + 1):
        for pairs in itertools.combinations(cells, k):
            rows = {r for r, _ in pairs}
            cols = {s for _, s in pairs}
            if len(rows) < k or len(cols) < k:
                continue
            cost = sum(C[r][s] for r, s in pairs)
            cost += sum(C[r][q] for r in range(p) if r not in rows)
            cost += sum(C[p][s] for s in range(q) if s not in cols)
            best = cost if best is None else min(best, cost)
    return best


@given(st.integers(0, 3).flatmap(lambda p: st.integers(0, 3).flatmap(
    lambda q: st.lists(st.lists(st.integers(0, 9), min_size=q + 1, max_size=q + 1),
                       min_size=p + 1, max_size=p + 1))))
def test_lsape_small_matches_reference(C):
    assert lsape_small(C) == _lsape_reference(C)


@pytest.mark.parametrize("model", ["unit", "aids-muta"])
def test_identity_is_free_and_costs_nonnegative(model):
    c = get_cost_model(model)
    labels = ["C", "N", "O", 1, 2]
    for a in labels:
        assert c.node_subst(a, a) == 0 and c.edge_subst(a, a) == 0
        for b in labels:
            assert c.node_subst(a, b) >= 0 and c.edge_subst(a, b) >= 0
        assert min(c.node_del(a), c.node_ins(a), c.edge_del(a), c.edge_ins(a)) >= 0


def test_protein_identity_is_free():
    c = protein_costs()
    for beta in [("a", None), ("a", "b"), ("b", "b")]:
        assert c.edge_subst(beta, beta) == 0
    assert c.node_subst(("helix", "ACD"), ("helix", "ACD")) == 0

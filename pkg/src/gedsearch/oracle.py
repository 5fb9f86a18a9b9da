"""Brute-force GED and BM for small graphs.

Independent of the LP and assignment code paths; used to produce expected
values in the test-suite and behind ``ged --oracle``.
"""
from __future__ import annotations

import itertools
from fractions import Fraction

from .costs import CostModel, unit_costs
from .graph import LabeledGraph

__all__ = ["TooLarge", "MAX_NODES", "brute_force_ged", "brute_force_ged_ticks",
           "mapping_cost_ticks", "brute_force_bm"]

MAX_NODES = 8


class TooLarge(ValueError):
    pass


def _check(g, h):
    if g.n > MAX_NODES or h.n > MAX_NODES:
        raise TooLarge(f"brute force limited to {MAX_NODES} nodes, got {g.n} and {h.n}")


def mapping_cost_ticks(g: LabeledGraph, h: LabeledGraph, mapping, c: CostModel) -> int:
    """Cost (ticks) of the edit path induced by a partial injective node map.

    ``mapping[i]`` is an H node or ``None``.  An edge whose endpoints map
    onto an H edge is substituted unless deleting and re-inserting is
    cheaper; all other edges are deleted/inserted.
    """
    total = 0
    used = set()
    for i, k in enumerate(mapping):
        if k is None:
            total += c.node_del_ticks(g.node_labels[i])
        else:
            used.add(k)
            total += c.node_subst_ticks(g.node_labels[i], h.node_labels[k])
    for k in h.nodes:
        if k not in used:
            total += c.node_ins_ticks(h.node_labels[k])
    covered = set()
    for (i, j), a in zip(g.edges, g.edge_labels):
        k, l = mapping[i], mapping[j]
        if k is not None and l is not None and h.has_edge(k, l):
            b = h.edge_label(k, l)
            covered.add(h.edge_id(k, l))
            total += min(c.edge_subst_ticks(a, b), c.edge_del_ticks(a) + c.edge_ins_ticks(b))
        else:
            total += c.edge_del_ticks(a)
    for f, b in enumerate(h.edge_labels):
        if f not in covered:
            total += c.edge_ins_ticks(b)
    return total


def brute_force_ged_ticks(g: LabeledGraph, h: LabeledGraph, c: CostModel):
    """Depth-first enumeration of partial injective maps with cost pruning."""
    _check(g, h)
    n, m = g.n, h.n
    gl, hl = g.node_labels, h.node_labels
    g_nb = [[j for j in g.neighbors(i) if j < i] for i in range(n)]
    mapping = [None] * n
    best = [None, None]
    used = [False] * m

    # start from the delete-everything path
    best[0] = mapping_cost_ticks(g, h, [None] * n, c)
    best[1] = tuple([None] * n)

    def rec(i, cost):
        if cost >= best[0]:
            return
        if i == n:
            # unmatched H nodes and H edges not yet accounted for
            extra = 0
            for k in range(m):
                if not used[k]:
                    extra += c.node_ins_ticks(hl[k])
            inv = {k: idx for idx, k in enumerate(mapping) if k is not None}
            for (k, l), b in zip(h.edges, h.edge_labels):
                if k not in inv or l not in inv:
                    extra += c.edge_ins_ticks(b)
            if cost + extra < best[0]:
                best[0] = cost + extra
                best[1] = tuple(mapping)
            return
        a = gl[i]
        for k in [*range(m), None]:
            if k is not None and used[k]:
                continue
            step = c.node_del_ticks(a) if k is None else c.node_subst_ticks(a, hl[k])
            # edges to earlier G nodes, and H edges between images now fixed
            for j in g_nb[i]:
                ea = g.edge_label(i, j)
                kj = mapping[j]
                if k is not None and kj is not None and h.has_edge(k, kj):
                    eb = h.edge_label(k, kj)
                    step += min(c.edge_subst_ticks(ea, eb), c.edge_del_ticks(ea) + c.edge_ins_ticks(eb))
                else:
                    step += c.edge_del_ticks(ea)
            if k is not None:
                for j in range(i):
                    kj = mapping[j]
                    if kj is not None and h.has_edge(k, kj) and not g.has_edge(i, j):
                        step += c.edge_ins_ticks(h.edge_label(k, kj))
                used[k] = True
            mapping[i] = k
            rec(i + 1, cost + step)
            mapping[i] = None
            if k is not None:
                used[k] = False

    rec(0, 0)
    return best[0], best[1]


def brute_force_ged(g: LabeledGraph, h: LabeledGraph, c: CostModel | None = None):
    """Exact GED ``(value, mapping)``; ``mapping[i]`` is an H node or ``None``."""
    c = c or unit_costs()
    ticks, mapping = brute_force_ged_ticks(g, h, c)
    return ticks / c.scale, mapping


def _branch_cost_ticks(la, lb, c: CostModel) -> int:
    """Exhaustive error-correcting matching of two edge-label lists."""
    best = None
    q = len(lb)
    for choice in itertools.product([None, *range(q)], repeat=len(la)):
        picked = [s for s in choice if s is not None]
        if len(picked) != len(set(picked)):
            continue
        cost = sum(c.edge_del_ticks(a) if s is None else c.edge_subst_ticks(a, lb[s])
                   for a, s in zip(la, choice))
        cost += sum(c.edge_ins_ticks(lb[s]) for s in range(q) if s not in picked)
        if best is None or cost < best:
            best = cost
    return best


def brute_force_bm(g: LabeledGraph, h: LabeledGraph, c: CostModel | None = None) -> Fraction:
    """BM by enumerating every vertex assignment and every inner matching."""
    c = c or unit_costs()
    _check(g, h)
    gi = [[g.edge_labels[e] for e in g.incident_edges(i)] for i in g.nodes]
    hk = [[h.edge_labels[e] for e in h.incident_edges(k)] for k in h.nodes]
    memo = {}

    def branch(i, k):
        if (i, k) not in memo:
            if k is None:
                memo[i, k] = 2 * c.node_del_ticks(g.node_labels[i]) + sum(c.edge_del_ticks(a) for a in gi[i])
            elif i is None:
                memo[i, k] = 2 * c.node_ins_ticks(h.node_labels[k]) + sum(c.edge_ins_ticks(b) for b in hk[k])
            else:
                memo[i, k] = 2 * c.node_subst_ticks(g.node_labels[i], h.node_labels[k]) + \
                    _branch_cost_ticks(gi[i], hk[k], c)
        return memo[i, k]

    best = None
    for choice in itertools.product([None, *h.nodes], repeat=g.n):
        picked = [k for k in choice if k is not None]
        if len(picked) != len(set(picked)):
            continue
        cost = sum(branch(i, k) for i, k in enumerate(choice))
        cost += sum(branch(None, k) for k in h.nodes if k not in picked)
        if best is None or cost < best:
            best = cost
    return Fraction(best, 2 * c.scale)

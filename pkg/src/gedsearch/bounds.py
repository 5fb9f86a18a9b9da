"""Global GED lower bounds: label sets (LS), branch matching (BM) and the
FORI linear relaxation (FORILP)."""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .assignment import lsap_solve, multiset_edit_distance, pad_for_insert_delete
from .costs import CostModel, unit_costs
from .graph import LabeledGraph, _label_key
from .lp import LpSolution, LpStatus, lp_solve
from .model import IlpModel, build_fori

__all__ = [
    "BoundResult",
    "UnsupportedCostModel",
    "InfeasibleFixings",
    "DivisionByZeroGed",
    "ls_bound",
    "bm_bound",
    "bm_unit_closed_form",
    "bm_lift",
    "fori_lp_bound",
    "fixings_for",
    "gap",
    "compute_bound",
]


class UnsupportedCostModel(ValueError):
    pass


class InfeasibleFixings(ValueError):
    pass


class DivisionByZeroGed(ZeroDivisionError):
    pass


@dataclass
class BoundResult:
    """A lower bound on GED.

    ``value`` is in real cost units; ``ticks`` is the same value in integer
    tick units of the cost model (a :class:`Fraction` whenever it is known
    exactly, else a float).
    """

    value: float
    algorithm: str
    elapsed: float
    ticks: object = None
    exact: Fraction | None = None
    certificate: dict | None = field(default=None, repr=False)

    def as_dict(self) -> dict:
        cert = None
        if self.certificate and "primal_objective" in self.certificate:
            cert = {k: float(self.certificate[k]) for k in ("primal_objective", "dual_objective")}
        return {"algorithm": self.algorithm, "value": self.value,
                "elapsed_ms": round(self.elapsed * 1000, 3), "certificate": cert}


def ls_bound(g: LabeledGraph, h: LabeledGraph, c: CostModel | None = None) -> BoundResult:
    """Label-set bound; defined for unit costs only."""
    if c is not None and not c.is_unit:
        raise UnsupportedCostModel(f"LS is only valid for unit costs, not {c.name!r}")
    t0 = time.perf_counter()
    val = multiset_edit_distance(g.node_labels, h.node_labels) + \
        multiset_edit_distance(g.edge_labels, h.edge_labels)
    return BoundResult(float(val), "LS", time.perf_counter() - t0, Fraction(val), Fraction(val))


def _incident_labels(g: LabeledGraph, v: int) -> tuple:
    return tuple(sorted((g.edge_labels[e] for e in g.incident_edges(v)), key=_label_key))


class _BranchCosts:
    """Inner (edge-label) matching costs, memoized on the label multisets."""

    def __init__(self, c: CostModel):
        self.c = c
        self.memo: dict = {}

    def match(self, la: tuple, lb: tuple):
        key = (la, lb)
        if key not in self.memo:
            c = self.c
            sub = [[c.edge_subst_ticks(a, b) for b in lb] for a in la]
            padded = pad_for_insert_delete(sub, [c.edge_del_ticks(a) for a in la],
                                           [c.edge_ins_ticks(b) for b in lb])
            res = lsap_solve(padded, tie_break=False)
            self.memo[key] = (res.total_cost, res.row_to_col)
        return self.memo[key]


def _bm_matrix(g: LabeledGraph, h: LabeledGraph, c: CostModel):
    """Padded outer matrix in half-ticks (node costs doubled, edge costs not)."""
    bc = _BranchCosts(c)
    gi = [_incident_labels(g, i) for i in g.nodes]
    hk = [_incident_labels(h, k) for k in h.nodes]
    sub = [[2 * c.node_subst_ticks(g.node_labels[i], h.node_labels[k]) + bc.match(gi[i], hk[k])[0]
            for k in h.nodes] for i in g.nodes]
    dele = [2 * c.node_del_ticks(g.node_labels[i]) + sum(c.edge_del_ticks(a) for a in gi[i])
            for i in g.nodes]
    ins = [2 * c.node_ins_ticks(h.node_labels[k]) + sum(c.edge_ins_ticks(b) for b in hk[k])
           for k in h.nodes]
    return pad_for_insert_delete(sub, dele, ins), bc, gi, hk


def bm_bound(g: LabeledGraph, h: LabeledGraph, c: CostModel | None = None,
             details: bool = False) -> BoundResult:
    """Branch-match bound for general costs.

    Every vertex pair is priced by its label cost plus an optimal matching
    of the incident edge labels, where edge terms count one half (each edge
    appears in the branches of both endpoints).  Deleted/inserted vertices
    pay for their whole branch.  With ``details`` the certificate holds the
    node mapping and the per-branch edge matchings.
    """
    c = c or unit_costs()
    t0 = time.perf_counter()
    matrix, bc, gi, hk = _bm_matrix(g, h, c)
    res = lsap_solve(matrix, tie_break=details)
    half_ticks = res.total_cost
    ticks = Fraction(half_ticks, 2)
    cert = None
    if details:
        node_map = [None] * g.n
        for i in g.nodes:
            k = res.row_to_col[i]
            node_map[i] = k if k < h.n else None
        cert = {"node_map": node_map, "half_ticks": half_ticks}
    return BoundResult(float(ticks / c.scale), "BM", time.perf_counter() - t0, ticks,
                       ticks / c.scale, cert)


def bm_unit_closed_form(g: LabeledGraph, h: LabeledGraph) -> Fraction:
    """Unit-cost BM: label mismatch plus half the multiset edit distance of
    incident edge labels, optimized over vertex assignments."""
    gi = [_incident_labels(g, i) for i in g.nodes]
    hk = [_incident_labels(h, k) for k in h.nodes]
    sub = [[2 * (g.node_labels[i] != h.node_labels[k]) + multiset_edit_distance(gi[i], hk[k])
            for k in h.nodes] for i in g.nodes]
    dele = [2 + len(gi[i]) for i in g.nodes]
    ins = [2 + len(hk[k]) for k in h.nodes]
    res = lsap_solve(pad_for_insert_delete(sub, dele, ins), tie_break=False)
    return Fraction(res.total_cost, 2)


def bm_lift(g: LabeledGraph, h: LabeledGraph, c: CostModel, model: IlpModel) -> list[Fraction]:
    """Map the BM solution to a point of the relaxed-F1 (BM polytope) model.

    Node variables come from the BM vertex assignment.  Every branch
    contributes one half to the edge variable its inner matching selects, so
    an edge matched consistently from both endpoints gets 1, otherwise two
    halves.  The objective of the point equals the BM value.
    """
    matrix, bc, gi, hk = _bm_matrix(g, h, c)
    res = lsap_solve(matrix, tie_break=True)
    x = [Fraction(0)] * model.n_vars
    half = Fraction(1, 2)
    idx = model.index
    node_map = {}
    for i in g.nodes:
        k = res.row_to_col[i]
        node_map[i] = k if k < h.n else None
        x[idx["x", i, node_map[i]]] = Fraction(1)
    mapped_h = {k for k in node_map.values() if k is not None}
    for k in h.nodes:
        if k not in mapped_h:
            x[idx["x", None, k]] = Fraction(1)

    def branch_edges(graph, v):
        return sorted(graph.incident_edges(v), key=lambda e: _label_key(graph.edge_labels[e]))

    for i in g.nodes:
        k = node_map[i]
        ge = branch_edges(g, i)
        if k is None:
            for e in ge:
                x[idx["y", e, None]] += half
            continue
        he = branch_edges(h, k)
        _, assign = bc.match(gi[i], hk[k])
        used = set()
        for r, e in enumerate(ge):
            col = assign[r]
            if col < len(he):
                x[idx["y", e, he[col]]] += half
                used.add(col)
            else:
                x[idx["y", e, None]] += half
        for col, f in enumerate(he):
            if col not in used:
                x[idx["y", None, f]] += half
    for k in h.nodes:
        if k not in mapped_h:
            for f in h.incident_edges(k):
                x[idx["y", None, f]] += half
    return x


def fixings_for(model: IlpModel, fixed: Iterable[tuple]) -> dict[int, int]:
    """Translate node-pair anchors into variable fixings for a FORI model.

    ``(i, k)`` fixes ``x[i,k] = 1``; ``(i, None)`` deletes ``i`` and
    ``(None, k)`` inserts ``k`` (all their ``x`` set to 0).
    """
    g, h = model.g, model.h
    fix: dict[int, int] = {}
    seen_g, seen_h = set(), set()
    for i, k in fixed:
        if i is not None and i in seen_g or k is not None and k in seen_h:
            raise InfeasibleFixings(f"anchor ({i}, {k}) is not injective")
        if i is not None:
            seen_g.add(i)
        if k is not None:
            seen_h.add(k)
        if i is not None and k is not None:
            fix[model.index["x", i, k]] = 1
        elif i is not None:
            for kk in h.nodes:
                fix[model.index["x", i, kk]] = 0
        elif k is not None:
            for ii in g.nodes:
                fix[model.index["x", ii, k]] = 0
    for j, v in list(fix.items()):
        if v == 1:
            _, i, k = model.keys[j]
            for kk in h.nodes:
                if kk != k and fix.get(model.index["x", i, kk]) == 1:
                    raise InfeasibleFixings(f"node {i} anchored twice")
    return fix


def fori_lp_bound(g: LabeledGraph, h: LabeledGraph, c: CostModel | None = None,
                  fixed: Iterable[tuple] | None = None, exact: bool = False,
                  model: IlpModel | None = None) -> BoundResult:
    """Optimal value of the FORI LP relaxation, optionally anchor-aware.

    The certificate carries the primal and dual objectives (equal at
    optimality) and the :class:`~gedsearch.lp.LpSolution` itself.
    """
    c = c or unit_costs()
    t0 = time.perf_counter()
    model = model or build_fori(g, h, c)
    fix = fixings_for(model, fixed) if fixed else None
    sol: LpSolution = lp_solve(model, fix, exact=exact)
    if sol.status is LpStatus.INFEASIBLE:
        raise InfeasibleFixings("anchored FORI relaxation is infeasible")
    ticks = sol.objective
    exact_val = Fraction(ticks) / c.scale if exact else None
    cert = {"primal_objective": Fraction(sol.objective, c.scale) if exact else sol.objective / c.scale,
            "dual_objective": Fraction(sol.dual_objective, c.scale) if exact
            else sol.dual_objective / c.scale,
            "solution": sol, "model": model, "fixings": fix}
    return BoundResult(float(Fraction(ticks) / c.scale) if exact else ticks / c.scale, "FORILP",
                       time.perf_counter() - t0, ticks, exact_val, cert)


def compute_bound(alg: str, g: LabeledGraph, h: LabeledGraph, c: CostModel, **kw) -> BoundResult:
    alg = alg.upper().replace("-", "").replace("_", "")
    if alg == "LS":
        return ls_bound(g, h, c)
    if alg == "BM":
        return bm_bound(g, h, c)
    if alg == "FORILP":
        return fori_lp_bound(g, h, c, **kw)
    raise ValueError(f"unknown bound {alg!r}")


def gap(ged, lb) -> float:
    """Relative gap ``(ged - lb) / ged``.  For ``ged == 0`` the gap is 0 if
    ``lb == 0`` and undefined otherwise."""
    if ged == 0:
        if lb == 0:
            return 0.0
        raise DivisionByZeroGed("gap undefined for GED = 0 with a nonzero bound")
    if ged < 0 or lb > ged + 1e-9 * max(1.0, abs(ged)):
        raise ValueError(f"need 0 <= lb <= ged, got ged={ged}, lb={lb}")
    return float((ged - lb) / ged)

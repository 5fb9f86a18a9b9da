"""Integer programs for GED: FORI, F1 and the relaxed F1 (BM polytope).

All coefficients are integer ticks of the cost model (see
:mod:`gedsearch.costs`).  Models are stored sparse, one coefficient list per
row, and every variable is binary in the integer program.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import numpy as np

from .costs import CostModel
from .graph import LabeledGraph, OrientedArcSet, orient

__all__ = [
    "Row",
    "IlpModel",
    "ThresholdedModel",
    "ReducedCosts",
    "reduced_costs",
    "build_fori",
    "build_f1",
    "build_bm_polytope",
    "add_threshold",
    "write_lp",
]

LE, EQ = "<=", "="


@dataclass(frozen=True)
class Row:
    idx: tuple
    coef: tuple
    sense: str
    rhs: int
    tag: tuple = ()

    def activity(self, x) -> object:
        return sum(c * x[j] for j, c in zip(self.idx, self.coef))

    def satisfied(self, x, tol=0) -> bool:
        a = self.activity(x)
        if self.sense == LE:
            return a <= self.rhs + tol
        return abs(a - self.rhs) <= tol


@dataclass(frozen=True, eq=False)
class IlpModel:
    """A 0/1 program ``min obj·x + constant`` over sparse linear rows.

    ``keys[j]`` identifies variable ``j``: ``("x", i, k)`` for node maps,
    ``("z", (i, j), (k, l))`` for FORI arc maps and ``("y", e, f)`` for F1
    edge maps, where ``None`` stands for the dummy element.  Upper bounds of
    1 are implied by the rows of every model built here, so LP relaxations
    only need ``x >= 0``.
    """

    formulation: str
    keys: tuple
    kinds: tuple
    objective: tuple
    constant: int
    rows: tuple
    scale: int = 1
    g: LabeledGraph | None = None
    h: LabeledGraph | None = None
    costs: CostModel | None = None
    index: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if not self.index:
            object.__setattr__(self, "index", {k: j for j, k in enumerate(self.keys)})

    @property
    def n_vars(self) -> int:
        return len(self.keys)

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    def var_names(self) -> list[str]:
        return [_var_name(k) for k in self.keys]

    def count(self, kind: str) -> int:
        return sum(1 for k in self.kinds if k == kind)

    def rows_tagged(self, tag: str) -> list[Row]:
        return [r for r in self.rows if r.tag and r.tag[0] == tag]

    def value(self, x) -> object:
        """Objective (including the constant) in ticks."""
        return sum(c * x[j] for j, c in enumerate(self.objective) if c) + self.constant

    def is_feasible(self, x, tol=0) -> bool:
        if any(v < -tol or v > 1 + tol for v in x):
            return False
        return all(r.satisfied(x, tol) for r in self.rows)

    def dense(self, dtype=float):
        """``(A, b, is_eq, c)`` as numpy arrays (``dtype=object`` keeps ints exact)."""
        A = np.zeros((self.n_rows, self.n_vars), dtype=dtype)
        for r, row in enumerate(self.rows):
            for j, c in zip(row.idx, row.coef):
                A[r, j] += c
        b = np.array([row.rhs for row in self.rows], dtype=dtype)
        is_eq = np.array([row.sense == EQ for row in self.rows], dtype=bool)
        c = np.array(self.objective, dtype=dtype)
        return A, b, is_eq, c

    def permuted_rows(self, order: Sequence[int]) -> "IlpModel":
        return replace(self, rows=tuple(self.rows[i] for i in order))

    def with_rows(self, extra: Sequence[Row]) -> "IlpModel":
        return replace(self, rows=self.rows + tuple(extra))


@dataclass(frozen=True, eq=False)
class ThresholdedModel(IlpModel):
    """FORI plus the row ``objective + constant <= tau``."""

    base: IlpModel | None = None
    tau: float = 0.0
    tau_ticks: Fraction = Fraction(0)


@dataclass(frozen=True)
class ReducedCosts:
    """Mapping costs net of deletion/insertion, plus the constant ``K``.

    ``node[i, k]`` is ``c(i,k) - c(i,eps) - c(eps,k)``; ``arc[a, b]`` the
    same for G-arc ``arcs.g_arcs[a]`` and H-arc ``arcs.h_arcs[b]``.
    """

    node: np.ndarray
    arc: np.ndarray
    K: int
    arcs: OrientedArcSet


def reduced_costs(g: LabeledGraph, h: LabeledGraph, c: CostModel) -> ReducedCosts:
    arcs = orient(g, h)
    nd = [c.node_del_ticks(a) for a in g.node_labels]
    ni = [c.node_ins_ticks(b) for b in h.node_labels]
    ed = [c.edge_del_ticks(a) for a in g.edge_labels]
    ei = [c.edge_ins_ticks(b) for b in h.edge_labels]
    K = sum(nd) + sum(ni) + sum(ed) + sum(ei)
    node = np.zeros((g.n, h.n), dtype=np.int64)
    for i, a in enumerate(g.node_labels):
        for k, b in enumerate(h.node_labels):
            node[i, k] = c.node_subst_ticks(a, b) - nd[i] - ni[k]
    h_edge = [h.edge_id(k, l) for k, l in arcs.h_arcs]
    arc = np.zeros((len(arcs.g_arcs), len(arcs.h_arcs)), dtype=np.int64)
    for e, a in enumerate(g.edge_labels):
        for t, f in enumerate(h_edge):
            arc[e, t] = c.edge_subst_ticks(a, h.edge_labels[f]) - ed[e] - ei[f]
    return ReducedCosts(node, arc, K, arcs)


def build_fori(g: LabeledGraph, h: LabeledGraph, c: CostModel) -> IlpModel:
    """FORI: node maps ``x[i,k]``, arc maps ``z[ij,kl]`` with G oriented
    ``i < j`` and H bidirected; objective uses reduced costs plus ``K``."""
    rc = reduced_costs(g, h, c)
    g_arcs, h_arcs = rc.arcs.g_arcs, rc.arcs.h_arcs
    keys, kinds, obj = [], [], []
    for i in g.nodes:
        for k in h.nodes:
            keys.append(("x", i, k))
            kinds.append("node_map")
            obj.append(int(rc.node[i, k]))
    x = {(i, k): i * h.n + k for i in g.nodes for k in h.nodes}
    z = {}
    for a, ga in enumerate(g_arcs):
        for t, ha in enumerate(h_arcs):
            z[(ga, ha)] = len(keys)
            keys.append(("z", ga, ha))
            kinds.append("arc_map")
            obj.append(int(rc.arc[a, t]))

    out_h = {k: [] for k in h.nodes}
    in_h = {k: [] for k in h.nodes}
    for k, l in h_arcs:
        out_h[k].append(l)
        in_h[l].append(k)
    out_g = {i: [] for i in g.nodes}
    in_g = {i: [] for i in g.nodes}
    for i, j in g_arcs:
        out_g[i].append(j)
        in_g[j].append(i)

    rows = []
    for i in g.nodes:
        rows.append(Row(tuple(x[i, k] for k in h.nodes), (1,) * h.n, LE, 1, ("assign_g", i)))
    for k in h.nodes:
        rows.append(Row(tuple(x[i, k] for i in g.nodes), (1,) * g.n, LE, 1, ("assign_h", k)))
    for i, j in g_arcs:
        for k in h.nodes:
            idx = [z[(i, j), (k, l)] for l in out_h[k]]
            rows.append(Row(tuple(idx) + (x[i, k],), (1,) * len(idx) + (-1,), LE, 0,
                            ("tail", (i, j), k)))
    for i, j in g_arcs:
        for k in h.nodes:
            idx = [z[(i, j), (l, k)] for l in in_h[k]]
            rows.append(Row(tuple(idx) + (x[j, k],), (1,) * len(idx) + (-1,), LE, 0,
                            ("head", (i, j), k)))
    for i in g.nodes:
        for k, l in h_arcs:
            idx = [z[(i, j), (k, l)] for j in out_g[i]] + [z[(j, i), (l, k)] for j in in_g[i]]
            rows.append(Row(tuple(idx) + (x[i, k],), (1,) * len(idx) + (-1,), LE, 0,
                            ("node_arc", i, (k, l))))
    return IlpModel("FORI", tuple(keys), tuple(kinds), tuple(obj), rc.K, tuple(rows),
                    c.scale, g, h, c)


def _f1_common(g: LabeledGraph, h: LabeledGraph, c: CostModel):
    keys, kinds, obj = [], [], []
    gl, hl = g.node_labels, h.node_labels
    for i in [*g.nodes, None]:
        for k in [*h.nodes, None]:
            if i is None and k is None:
                continue
            keys.append(("x", i, k))
            kinds.append("node_map")
            if i is None:
                obj.append(c.node_ins_ticks(hl[k]))
            elif k is None:
                obj.append(c.node_del_ticks(gl[i]))
            else:
                obj.append(c.node_subst_ticks(gl[i], hl[k]))
    ge, he = g.edge_labels, h.edge_labels
    for e in [*range(g.m), None]:
        for f in [*range(h.m), None]:
            if e is None and f is None:
                continue
            keys.append(("y", e, f))
            kinds.append("edge_map")
            if e is None:
                obj.append(c.edge_ins_ticks(he[f]))
            elif f is None:
                obj.append(c.edge_del_ticks(ge[e]))
            else:
                obj.append(c.edge_subst_ticks(ge[e], he[f]))
    index = {k: j for j, k in enumerate(keys)}
    rows = []
    for i in g.nodes:
        idx = [index["x", i, k] for k in [*h.nodes, None]]
        rows.append(Row(tuple(idx), (1,) * len(idx), EQ, 1, ("assign_g", i)))
    for k in h.nodes:
        idx = [index["x", i, k] for i in [*g.nodes, None]]
        rows.append(Row(tuple(idx), (1,) * len(idx), EQ, 1, ("assign_h", k)))
    for e in range(g.m):
        idx = [index["y", e, f] for f in [*range(h.m), None]]
        rows.append(Row(tuple(idx), (1,) * len(idx), EQ, 1, ("edge_g", e)))
    for f in range(h.m):
        idx = [index["y", e, f] for e in [*range(g.m), None]]
        rows.append(Row(tuple(idx), (1,) * len(idx), EQ, 1, ("edge_h", f)))
    return keys, kinds, obj, index, rows


def build_f1(g: LabeledGraph, h: LabeledGraph, c: CostModel) -> IlpModel:
    """F1 over the dummy-augmented node and edge sets (raw costs, no constant)."""
    keys, kinds, obj, index, rows = _f1_common(g, h, c)
    for e, (i, j) in enumerate(g.edges):
        for f, (k, l) in enumerate(h.edges):
            y = index["y", e, f]
            for t in (k, l):
                rows.append(Row((y, index["x", i, t], index["x", j, t]), (1, -1, -1), LE, 0,
                                ("topo", e, f, t)))
    return IlpModel("F1", tuple(keys), tuple(kinds), tuple(obj), 0, tuple(rows),
                    c.scale, g, h, c, index)


def build_bm_polytope(g: LabeledGraph, h: LabeledGraph, c: CostModel) -> IlpModel:
    """F1 with each pair of topological rows replaced by their average,
    ``2*y <= x_ik + x_jk + x_il + x_jl``."""
    keys, kinds, obj, index, rows = _f1_common(g, h, c)
    for e, (i, j) in enumerate(g.edges):
        for f, (k, l) in enumerate(h.edges):
            idx = (index["y", e, f], index["x", i, k], index["x", j, k],
                   index["x", i, l], index["x", j, l])
            rows.append(Row(idx, (2, -1, -1, -1, -1), LE, 0, ("relaxed", e, f)))
    return IlpModel("BM", tuple(keys), tuple(kinds), tuple(obj), 0, tuple(rows),
                    c.scale, g, h, c, index)


def add_threshold(m: IlpModel, tau) -> ThresholdedModel:
    """Append ``objective + constant <= tau`` (``tau`` in real cost units).

    Objective coefficients are integers, so the row is stored with the
    right-hand side ``floor(tau_ticks) - constant``; for 0/1 points this is
    exactly equivalent to the real-valued comparison.
    """
    base = m.base if isinstance(m, ThresholdedModel) else m
    tau_ticks = Fraction(repr(tau) if isinstance(tau, float) else tau) * base.scale
    idx = tuple(j for j, v in enumerate(base.objective) if v)
    coef = tuple(base.objective[j] for j in idx)
    row = Row(idx, coef, LE, math.floor(tau_ticks) - base.constant, ("threshold",))
    return ThresholdedModel(
        base.formulation + "-THR", base.keys, base.kinds, base.objective, base.constant,
        base.rows + (row,), base.scale, base.g, base.h, base.costs, base.index,
        base=base, tau=tau, tau_ticks=tau_ticks,
    )


def _var_name(key) -> str:
    def part(v):
        if v is None:
            return "eps"
        if isinstance(v, tuple):
            return "".join(str(t) for t in v) if all(t < 10 for t in v) else "_".join(map(str, v))
        return str(v)

    return f"{key[0]}_{part(key[1])}_{part(key[2])}"


def _fmt(v: Fraction) -> str:
    if v.denominator == 1:
        return str(v.numerator)
    return repr(float(v))


def write_lp(m: IlpModel, path: str | Path | None = None) -> str:
    """Model in CPLEX-LP text form; cost coefficients in real units."""
    names = m.var_names()
    s = Fraction(1, m.scale)

    def expr(idx, coef, factor=Fraction(1)):
        terms = []
        for j, cf in zip(idx, coef):
            if not cf:
                continue
            v = Fraction(cf) * factor
            terms.append(f"{'-' if v < 0 else '+'} {_fmt(abs(v))} {names[j]}")
        if not terms:
            return "0"
        out = " ".join(terms)
        return out[2:] if out.startswith("+ ") else "-" + out[1:]

    lines = [f"\\ {m.formulation} model, {m.n_vars} variables, {m.n_rows} rows",
             "Minimize",
             f" obj: {expr(range(m.n_vars), m.objective, s)} + {_fmt(m.constant * s)}",
             "Subject To"]
    for r, row in enumerate(m.rows):
        # only the threshold row carries cost coefficients
        factor = s if row.tag == ("threshold",) else Fraction(1)
        lines.append(f" r{r}: {expr(row.idx, row.coef, factor)} {row.sense} {_fmt(row.rhs * factor)}")
    lines.append("Binaries")
    lines.extend(f" {n}" for n in names)
    lines.append("End")
    text = "\n".join(lines) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text

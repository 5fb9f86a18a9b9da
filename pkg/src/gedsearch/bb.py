"""Branch-and-bound over FORI / F1 models.

``optimize`` runs best-first search and proves the optimum;
``feasibility`` runs depth-first on a thresholded model and stops at the
first verified solution.  Every incumbent is rebuilt from its node map and
checked in exact integer arithmetic before it is accepted, so a reported
solution never rests on floating-point rounding.
"""
from __future__ import annotations

import enum
import heapq
import math
import random
import threading
import time
from dataclasses import dataclass, field


from .lp import LpSolution, LpStatus, lp_solve
from .model import IlpModel, ThresholdedModel

__all__ = [
    "IlpStatus",
    "IlpSolution",
    "EditOp",
    "NonIntegralSolution",
    "ilp_solve",
    "extract_edit_path",
    "complete_from_node_map",
]

INT_TOL = 1e-6


class NonIntegralSolution(ValueError):
    pass


class IlpStatus(str, enum.Enum):
    OPTIMAL = "optimal"
    FEASIBLE = "feasible"
    INFEASIBLE = "infeasible"
    ABORTED = "aborted"


@dataclass
class IlpSolution:
    status: IlpStatus
    objective: float | None = None
    ticks: int | None = None
    x: tuple | None = None
    node_map: tuple | None = None
    node_count: int = 0
    elapsed: float = 0.0
    best_bound: float | None = None
    audit: list = field(default_factory=list, repr=False)

    @property
    def found(self) -> bool:
        return self.x is not None


@dataclass(frozen=True)
class EditOp:
    kind: str
    source: object
    target: object
    ticks: int
    cost: float


def _node_map_from_x(model: IlpModel, x) -> tuple:
    g = model.g
    node_map = [None] * g.n
    for j, key in enumerate(model.keys):
        if key[0] == "x" and key[1] is not None and key[2] is not None and x[j] > 0.5:
            node_map[key[1]] = key[2]
    return tuple(node_map)


def complete_from_node_map(model: IlpModel, node_map) -> list[int]:
    """Best 0/1 point of ``model`` whose node variables encode ``node_map``.

    Edge variables are switched on exactly where they pay off: an arc/edge
    whose endpoints map onto an H edge is mapped when that is cheaper than
    deleting and inserting.
    """
    g, h = model.g, model.h
    idx = model.index
    x = [0] * model.n_vars
    mapped_h = set()
    for i, k in enumerate(node_map):
        if k is not None:
            mapped_h.add(k)
    if model.formulation.startswith("FORI"):
        for i, k in enumerate(node_map):
            if k is not None:
                x[idx["x", i, k]] = 1
        for i, j in g.edges:
            k, l = node_map[i], node_map[j]
            if k is not None and l is not None and h.has_edge(k, l):
                var = idx["z", (i, j), (k, l)]
                if model.objective[var] < 0:
                    x[var] = 1
        return x
    # F1-style: dummy-augmented equalities
    for i, k in enumerate(node_map):
        x[idx["x", i, k]] = 1
    for k in h.nodes:
        if k not in mapped_h:
            x[idx["x", None, k]] = 1
    covered = set()
    for e, (i, j) in enumerate(g.edges):
        k, l = node_map[i], node_map[j]
        if k is not None and l is not None and h.has_edge(k, l):
            f = h.edge_id(k, l)
            sub, dele, ins = idx["y", e, f], idx["y", e, None], idx["y", None, f]
            if model.objective[sub] <= model.objective[dele] + model.objective[ins]:
                x[sub] = 1
                covered.add(f)
                continue
        x[idx["y", e, None]] = 1
    for f in range(h.m):
        if f not in covered:
            x[idx["y", None, f]] = 1
    return x


def _greedy_round(model: IlpModel, xv) -> tuple:
    """Node map from the largest LP node values, greedily kept injective."""
    pairs = []
    for j, key in enumerate(model.keys):
        if key[0] == "x" and key[1] is not None and key[2] is not None and xv[j] > INT_TOL:
            pairs.append((-float(xv[j]), j, key[1], key[2]))
    pairs.sort()
    node_map = [None] * model.g.n
    used = set()
    for _, _, i, k in pairs:
        if node_map[i] is None and k not in used:
            node_map[i] = k
            used.add(k)
    return tuple(node_map)


def ilp_solve(
    m: IlpModel,
    mode: str = "optimize",
    *,
    node_limit: int | None = None,
    time_limit: float | None = None,
    root: LpSolution | None = None,
    cancel: threading.Event | None = None,
    seed: int | None = None,
    audit: bool = False,
) -> IlpSolution:
    """Solve ``m`` as a 0/1 program by LP-based branch-and-bound.

    Parameters
    ----------
    m : IlpModel or ThresholdedModel
        FORI or F1 model.  In ``"feasibility"`` mode it should carry the
        threshold row.
    mode : {"optimize", "feasibility"}
        Prove the optimum (best-first), or stop at the first solution that
        satisfies all rows (depth-first).
    node_limit, time_limit : optional
        Budget; when exhausted the result is ``ABORTED`` (with the best
        incumbent, if any).
    root : LpSolution, optional
        Already-solved relaxation of the unthresholded root, reused instead
        of solving the root LP again.
    cancel : threading.Event, optional
        Cooperative cancellation; a set event aborts the search.
    seed : int, optional
        Randomizes tie-breaking among equally fractional branching
        candidates.
    audit : bool
        Record every pruning decision in ``IlpSolution.audit``.
    """
    if mode not in ("optimize", "feasibility"):
        raise ValueError(f"unknown mode {mode!r}")
    t0 = time.perf_counter()
    rng = random.Random(seed)
    thr = isinstance(m, ThresholdedModel)
    tau_cap = math.floor(m.tau_ticks) if thr else None
    branch_vars = [j for j, key in enumerate(m.keys)
                   if key[0] == "x" and key[1] is not None and key[2] is not None]
    tie = {j: rng.random() if seed is not None else 0.0 for j in branch_vars}

    best_ticks: int | None = None
    best_x = None
    best_map = None
    log = []
    nodes = 0

    def budget_hit() -> bool:
        if cancel is not None and cancel.is_set():
            return True
        if node_limit is not None and nodes >= node_limit:
            return True
        return time_limit is not None and time.perf_counter() - t0 > time_limit

    def try_incumbent(node_map) -> bool:
        nonlocal best_ticks, best_x, best_map
        x = complete_from_node_map(m, node_map)
        if not m.is_feasible(x):
            return False
        val = int(m.value(x))
        if best_ticks is None or val < best_ticks:
            best_ticks, best_x, best_map = val, tuple(x), tuple(node_map)
            return True
        return False

    def lower(lp_obj) -> int:
        # all integer points have integer tick objectives
        return math.ceil(lp_obj - INT_TOL)

    def solve_node(fix) -> LpSolution:
        if not fix and root is not None and root.optimal:
            if not thr or root.objective <= m.tau_ticks + INT_TOL:
                return root
        return lp_solve(m, fix)

    def pick_branch(xv):
        best_j, best_score = None, None
        for j in branch_vars:
            v = float(xv[j])
            frac = abs(v - round(v))
            if frac > INT_TOL:
                score = (-frac, tie[j], j)
                if best_score is None or score < best_score:
                    best_j, best_score = j, score
        return best_j

    def prune_reason(lp: LpSolution):
        if lp.status is LpStatus.INFEASIBLE:
            return "infeasible", None
        lb = lower(lp.objective)
        if tau_cap is not None and lb > tau_cap:
            return "bound>tau", lb
        if best_ticks is not None and lb >= best_ticks:
            return "bound>=incumbent", lb
        return None, lb

    def record(fix, reason, lb):
        if audit:
            log.append({"node": nodes, "depth": len(fix), "reason": reason, "bound": lb,
                        "incumbent": best_ticks, "tau": tau_cap})

    aborted = False
    best_bound = None
    if mode == "feasibility":
        stack = [{}]
        while stack:
            if budget_hit():
                aborted = True
                break
            fix = stack.pop()
            nodes += 1
            lp = solve_node(fix)
            reason, lb = prune_reason(lp)
            if reason:
                record(fix, reason, lb)
                continue
            xv = lp.primal
            if try_incumbent(_greedy_round(m, xv)) and best_ticks is not None:
                record(fix, "incumbent", lb)
                break
            j = pick_branch(xv)
            if j is None:
                if try_incumbent(_node_map_from_x(m, xv)):
                    record(fix, "incumbent", lb)
                    break
                record(fix, "integral-no-improvement", lb)
                continue
            stack.append({**fix, j: 0})
            stack.append({**fix, j: 1})
        if best_x is not None:
            status = IlpStatus.FEASIBLE
        else:
            status = IlpStatus.ABORTED if aborted else IlpStatus.INFEASIBLE
    else:
        counter = 0
        heap = [(-math.inf, counter, {})]
        while heap:
            if budget_hit():
                aborted = True
                break
            parent_lb, _, fix = heapq.heappop(heap)
            if best_ticks is not None and parent_lb >= best_ticks:
                record(fix, "bound>=incumbent", parent_lb)
                continue
            nodes += 1
            lp = solve_node(fix)
            reason, lb = prune_reason(lp)
            if reason:
                record(fix, reason, lb)
                continue
            xv = lp.primal
            try_incumbent(_greedy_round(m, xv))
            j = pick_branch(xv)
            if j is None:
                try_incumbent(_node_map_from_x(m, xv))
                record(fix, "integral", lb)
                continue
            if best_ticks is not None and lb >= best_ticks:
                record(fix, "bound>=incumbent", lb)
                continue
            for v in (1, 0):
                counter += 1
                heapq.heappush(heap, (lb, counter, {**fix, j: v}))
        if heap and aborted:
            best_bound = min(entry[0] for entry in heap)
        if best_x is None:
            status = IlpStatus.ABORTED if aborted else IlpStatus.INFEASIBLE
        else:
            status = IlpStatus.ABORTED if aborted else IlpStatus.OPTIMAL

    scale = m.scale
    return IlpSolution(
        status,
        objective=None if best_ticks is None else best_ticks / scale,
        ticks=best_ticks,
        x=best_x,
        node_map=best_map,
        node_count=nodes,
        elapsed=time.perf_counter() - t0,
        best_bound=None if best_bound is None else best_bound / scale,
        audit=log,
    )


def extract_edit_path(m: IlpModel, solution: IlpSolution | tuple | list) -> list[EditOp]:
    """Edit operations encoded by an integral solution of a FORI or F1 model.

    Costs are recomputed from the cost model, not read from the objective,
    so their sum is an independent check of the solver's objective value.
    """
    x = solution.x if isinstance(solution, IlpSolution) else solution
    if x is None:
        raise NonIntegralSolution("solution carries no point")
    if any(abs(v - round(v)) > INT_TOL for v in x):
        raise NonIntegralSolution("edit paths need an integral solution")
    x = [int(round(v)) for v in x]
    g, h, c = m.g, m.h, m.costs
    ops: list[EditOp] = []

    def add(kind, src, dst, ticks):
        ops.append(EditOp(kind, src, dst, ticks, ticks / c.scale))

    mapped_g, mapped_h = {}, set()
    for j, key in enumerate(m.keys):
        if key[0] == "x" and x[j] and key[1] is not None and key[2] is not None:
            mapped_g[key[1]] = key[2]
            mapped_h.add(key[2])
    for i in g.nodes:
        if i in mapped_g:
            k = mapped_g[i]
            if g.node_labels[i] != h.node_labels[k]:
                add("relabel_node", i, k, c.node_subst_ticks(g.node_labels[i], h.node_labels[k]))
        else:
            add("delete_node", i, None, c.node_del_ticks(g.node_labels[i]))
    for k in h.nodes:
        if k not in mapped_h:
            add("insert_node", None, k, c.node_ins_ticks(h.node_labels[k]))

    edge_map = {}
    for j, key in enumerate(m.keys):
        if not x[j]:
            continue
        if key[0] == "z":
            (i, jj), (k, l) = key[1], key[2]
            edge_map[g.edge_id(i, jj)] = h.edge_id(k, l)
        elif key[0] == "y" and key[1] is not None and key[2] is not None:
            edge_map[key[1]] = key[2]
    hit = set(edge_map.values())
    for e, (i, j) in enumerate(g.edges):
        a = g.edge_labels[e]
        if e in edge_map:
            f = edge_map[e]
            if a != h.edge_labels[f]:
                add("relabel_edge", (i, j), h.edges[f], c.edge_subst_ticks(a, h.edge_labels[f]))
        else:
            add("delete_edge", (i, j), None, c.edge_del_ticks(a))
    for f, b in enumerate(h.edge_labels):
        if f not in hit:
            add("insert_edge", None, h.edges[f], c.edge_ins_ticks(b))
    return ops

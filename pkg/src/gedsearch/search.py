"""Filter-and-verify similarity search.

For each dataset graph the bounds of the filter chain are computed in
order; the first bound above ``tau`` discards the graph.  Survivors go to a
threshold feasibility check by branch-and-bound, which either finds an edit
path of cost at most ``tau`` (accept) or proves none exists (discard).
"""
from __future__ import annotations

import os
import threading
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .bb import IlpStatus, ilp_solve
from .bounds import BoundResult, UnsupportedCostModel, bm_bound, fori_lp_bound, ls_bound
from .costs import CostModel, get_cost_model
from .graph import LabeledGraph
from .model import add_threshold, build_fori

__all__ = [
    "SearchConfig",
    "GraphRecord",
    "SearchReport",
    "FilterResult",
    "DEFAULT_CHAINS",
    "filter_stage",
    "verify",
    "fori_sim",
    "naive_filter",
]

ALGORITHMS = ("LS", "BM", "FORILP")

#: default bound chain per cost model
DEFAULT_CHAINS = {
    "unit": ("LS", "BM", "FORILP"),
    "aids-muta": ("BM", "FORILP"),
    "protein": ("FORILP",),
}

# float LP bounds must exceed tau by this many ticks before they discard
LP_SAFETY = 1e-7


def _norm_alg(alg: str) -> str:
    a = alg.upper().replace("-", "").replace("_", "")
    if a not in ALGORITHMS:
        raise ValueError(f"unknown bound {alg!r}; choose from {ALGORITHMS}")
    return a


@dataclass
class SearchConfig:
    """Search parameters.

    ``tau`` is in real cost units.  ``filter_chain`` defaults per cost
    model (see :data:`DEFAULT_CHAINS`); LS is rejected for non-unit costs.
    ``budget_ms`` limits the time spent per dataset graph, ``node_limit``
    the branch-and-bound nodes per verification.
    """

    tau: float
    cost_model: str | CostModel = "unit"
    filter_chain: tuple | None = None
    budget_ms: float | None = None
    node_limit: int | None = None
    jobs: int = 1
    timings: bool = True

    def __post_init__(self):
        c = get_cost_model(self.cost_model)
        if self.filter_chain is None:
            self.filter_chain = DEFAULT_CHAINS.get(c.name, ("BM", "FORILP"))
        self.filter_chain = tuple(_norm_alg(a) for a in self.filter_chain)
        if "LS" in self.filter_chain and not c.is_unit:
            raise UnsupportedCostModel("LS is only valid under unit costs")
        if self.jobs is None or self.jobs < 1:
            self.jobs = os.cpu_count() or 1
        if self.tau < 0:
            raise ValueError("tau must be non-negative")

    @property
    def costs(self) -> CostModel:
        return get_cost_model(self.cost_model)

    @property
    def tau_ticks(self) -> Fraction:
        return self.costs.to_ticks(self.tau)


@dataclass
class GraphRecord:
    """Outcome for one dataset graph.

    ``verdict`` is ``accepted``, ``discarded`` or ``aborted``;
    ``stage_reached`` names the last stage run (a bound or ``THR``).
    """

    graph_id: str
    verdict: str
    stage_reached: str
    bounds: dict = field(default_factory=dict)
    discarded_by: str | None = None
    nodes_explored: int = 0
    elapsed_ms: float | None = None

    def as_dict(self) -> dict:
        return {"graph_id": self.graph_id, "verdict": self.verdict,
                "stage_reached": self.stage_reached,
                "bounds": {k: float(v) for k, v in self.bounds.items()},
                "discarded_by": self.discarded_by, "nodes_explored": self.nodes_explored,
                "elapsed_ms": self.elapsed_ms}


@dataclass
class SearchReport:
    query: str
    tau: float
    cost_model: str
    filter_chain: tuple
    records: list = field(default_factory=list)
    elapsed_ms: float | None = None

    @property
    def accepted(self) -> list:
        return [r.graph_id for r in self.records if r.verdict == "accepted"]

    @property
    def aborted(self) -> list:
        return [r.graph_id for r in self.records if r.verdict == "aborted"]

    @property
    def counts(self) -> dict:
        out = {stage: 0 for stage in (*self.filter_chain, "THR")}
        out["accepted"] = 0
        out["aborted"] = 0
        for r in self.records:
            if r.verdict == "discarded":
                out[r.discarded_by] += 1
            else:
                out[r.verdict] += 1
        return out

    @property
    def matches(self) -> float:
        return len(self.accepted) / len(self.records) if self.records else 0.0

    @property
    def coverage(self) -> float:
        """Fraction of graphs decided within budget."""
        return 1.0 - len(self.aborted) / len(self.records) if self.records else 1.0

    def as_dict(self) -> dict:
        return {
            "query": self.query,
            "tau": self.tau,
            "cost_model": self.cost_model,
            "filter_chain": list(self.filter_chain),
            "dataset_size": len(self.records),
            "accepted": self.accepted,
            "aborted": self.aborted,
            "counts": self.counts,
            "matches": self.matches,
            "coverage": self.coverage,
            "elapsed_ms": self.elapsed_ms,
            "records": [r.as_dict() for r in self.records],
        }


@dataclass
class FilterResult:
    discard: bool
    value: float
    bound: BoundResult = field(repr=False, default=None)


def _bound(alg: str, q, h, c) -> BoundResult:
    if alg == "LS":
        return ls_bound(q, h, c)
    if alg == "BM":
        return bm_bound(q, h, c)
    return fori_lp_bound(q, h, c)


def filter_stage(q: LabeledGraph, h: LabeledGraph, alg: str, tau, c: CostModel | str = "unit") -> FilterResult:
    """Compute one bound and decide: discard iff the bound exceeds ``tau``.

    A bound equal to ``tau`` passes.  LS and BM are compared exactly; the
    float LP bound only discards when it clears ``tau`` by a small margin,
    so rounding noise can never discard a match.
    """
    c = get_cost_model(c)
    alg = _norm_alg(alg)
    if alg == "LS" and not c.is_unit:
        raise UnsupportedCostModel("LS is only valid under unit costs")
    res = _bound(alg, q, h, c)
    tau_ticks = c.to_ticks(tau)
    if res.exact is not None:
        discard = res.exact * c.scale > tau_ticks
    else:
        discard = res.ticks > tau_ticks + LP_SAFETY
    return FilterResult(bool(discard), res.value, res)


def verify(q: LabeledGraph, h: LabeledGraph, tau, c: CostModel | str = "unit", *,
           model=None, root=None, node_limit=None, time_limit=None, cancel=None):
    """Threshold feasibility: is there an edit path of cost at most ``tau``?"""
    c = get_cost_model(c)
    model = model or build_fori(q, h, c)
    thr = add_threshold(model, tau)
    return ilp_solve(thr, "feasibility", root=root, node_limit=node_limit,
                     time_limit=time_limit, cancel=cancel)


def _process(args) -> GraphRecord:
    gid, q, h, cfg = args
    return _process_one(gid, q, h, cfg)


def _process_one(gid: str, q: LabeledGraph, h: LabeledGraph, cfg: SearchConfig,
                 cancel: threading.Event | None = None) -> GraphRecord:
    t0 = time.perf_counter()
    c = cfg.costs
    deadline = None if cfg.budget_ms is None else t0 + cfg.budget_ms / 1000.0

    def out_of_time():
        return (deadline is not None and time.perf_counter() > deadline) or \
            (cancel is not None and cancel.is_set())

    def finish(rec: GraphRecord) -> GraphRecord:
        if cfg.timings:
            rec.elapsed_ms = round((time.perf_counter() - t0) * 1000, 3)
        return rec

    bounds = {}
    root = model = None
    for alg in cfg.filter_chain:
        if out_of_time():
            return finish(GraphRecord(gid, "aborted", alg, bounds))
        fr = filter_stage(q, h, alg, cfg.tau, c)
        bounds[alg] = fr.value
        if alg == "FORILP":
            root = fr.bound.certificate["solution"]
            model = fr.bound.certificate["model"]
        if fr.discard:
            return finish(GraphRecord(gid, "discarded", alg, bounds, discarded_by=alg))
    remaining = None
    if deadline is not None:
        remaining = deadline - time.perf_counter()
        if remaining <= 0:
            return finish(GraphRecord(gid, "aborted", "THR", bounds))
    sol = verify(q, h, cfg.tau, c, model=model, root=root, node_limit=cfg.node_limit,
                 time_limit=remaining, cancel=cancel)
    if sol.status is IlpStatus.FEASIBLE:
        rec = GraphRecord(gid, "accepted", "THR", bounds, nodes_explored=sol.node_count)
    elif sol.status is IlpStatus.INFEASIBLE:
        rec = GraphRecord(gid, "discarded", "THR", bounds, discarded_by="THR",
                          nodes_explored=sol.node_count)
    else:
        rec = GraphRecord(gid, "aborted", "THR", bounds, nodes_explored=sol.node_count)
    return finish(rec)


def _ids(dataset) -> list[tuple[str, LabeledGraph]]:
    items = list(dataset.items()) if isinstance(dataset, dict) else list(dataset)
    out = []
    for pos, item in enumerate(items):
        if isinstance(item, LabeledGraph):
            out.append((item.name or str(pos), item))
        else:
            gid, g = item
            out.append((str(gid), g))
    ids = [gid for gid, _ in out]
    if len(set(ids)) != len(ids):
        raise ValueError("dataset graph ids must be unique")
    return out


def fori_sim(q: LabeledGraph, dataset, cfg: SearchConfig,
             cancel: threading.Event | None = None) -> SearchReport:
    """Return every dataset graph within distance ``cfg.tau`` of ``q``.

    ``dataset`` is a sequence of graphs (ids from their names or positions),
    of ``(id, graph)`` pairs, or a dict.  With ``cfg.jobs > 1`` graphs are
    processed in worker processes; records are always reported in dataset
    order, so the result does not depend on the degree of parallelism.
    """
    t0 = time.perf_counter()
    items = _ids(dataset)
    report = SearchReport(q.name, cfg.tau, cfg.costs.name, cfg.filter_chain)
    if cfg.jobs > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            records = list(pool.map(_process, [(gid, q, h, cfg) for gid, h in items],
                                    chunksize=max(1, len(items) // (4 * cfg.jobs))))
    else:
        records = [_process_one(gid, q, h, cfg, cancel) for gid, h in items]
    report.records = records
    if cfg.timings:
        report.elapsed_ms = round((time.perf_counter() - t0) * 1000, 3)
    return report


def naive_filter(q: LabeledGraph, dataset, tau, c: CostModel | str = "unit") -> list:
    """Reference answer by brute-force GED (small graphs only)."""
    from .oracle import brute_force_ged_ticks

    c = get_cost_model(c)
    tau_ticks = c.to_ticks(tau)
    return [gid for gid, h in _ids(dataset) if brute_force_ged_ticks(q, h, c)[0] <= tau_ticks]


def k_max(q: LabeledGraph, dataset, c: CostModel | str = "unit") -> float:
    """Largest delete-all-insert-all cost over the dataset (every graph is
    within this distance of ``q``)."""
    from .model import reduced_costs

    c = get_cost_model(c)
    ks = [reduced_costs(q, h, c).K for _, h in _ids(dataset)]
    return max(ks) / c.scale if ks else 0.0


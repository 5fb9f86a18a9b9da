"""End-to-end acceptance checks.

Each check returns a :class:`CheckResult`; :func:`run_all` runs them in
order and prints one ``PASS``/``FAIL``/``SKIP`` line each.  Used by
``gedsearch selftest`` and by the test-suite.
"""
from __future__ import annotations

import os
import time
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from .bb import IlpStatus, extract_edit_path, ilp_solve
from .bounds import bm_bound, fori_lp_bound, ls_bound
from .costs import (TAU_MULTIPLIERS, aids_muta_costs, get_cost_model, levenshtein,
                    protein_costs, unit_costs)
from .graph import random_graph
from .instances import star_cycle_dual, star_cycle_instance, synthetic_dataset, worked_example_pair
from .lp import check_dual_certificate, dual_objective, lp_solve
from .model import add_threshold, build_f1, build_fori, reduced_costs
from .oracle import brute_force_ged, brute_force_ged_ticks
from .search import SearchConfig, fori_sim, naive_filter

__all__ = ["CheckResult", "CHECKS", "run_check", "run_all"]


@dataclass
class CheckResult:
    number: int
    title: str
    status: str  # PASS, FAIL or SKIP
    detail: str
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return self.status != "FAIL"

    def line(self) -> str:
        return f"[{self.status}] {self.number}. {self.title}: {self.detail} ({self.seconds:.1f}s)"


class Skip(Exception):
    pass


def random_pair(rng, max_nodes, max_edges, labels=(2, 3), edge_labels=(1, 2)):
    na = int(rng.integers(labels[0], labels[1] + 1))
    ea = int(rng.integers(edge_labels[0], edge_labels[1] + 1))
    node_alpha = ("A", "B", "C")[:na]
    edge_alpha = ("-", "=")[:ea]
    out = []
    for _ in range(2):
        n = int(rng.integers(1, max_nodes + 1))
        m = int(rng.integers(0, min(max_edges, n * (n - 1) // 2) + 1))
        out.append(random_graph(rng, n, m, node_alpha, edge_alpha))
    return tuple(out)


# ---------------------------------------------------------------------------


def check_star_cycle(seed):
    """Closed form of FORI-LP (2n-5) and BM (n-2) on S_n vs C_n, n = 3..12."""
    bad = []
    t0 = time.perf_counter()
    for n in range(3, 13):
        g, h = star_cycle_instance(n)
        model = build_fori(g, h, unit_costs())
        ex = fori_lp_bound(g, h, exact=True, model=model)
        fl = fori_lp_bound(g, h, model=model)
        bm = bm_bound(g, h)
        if ex.exact != 2 * n - 5 or abs(fl.value - (2 * n - 5)) > 1e-9 or bm.exact != n - 2:
            bad.append((n, ex.exact, fl.value, bm.exact))
    dt = time.perf_counter() - t0
    if bad:
        return False, f"mismatches {bad}"
    if dt >= 10:
        return False, f"values correct but took {dt:.1f}s (limit 10s)"
    return True, "exact 2n-5 and n-2 for n=3..12, float within 1e-9"


def check_dual(seed):
    """Closed-form dual certificate of the S_n/C_n LP."""
    for n in range(3, 13):
        g, h = star_cycle_instance(n)
        model = build_fori(g, h, unit_costs())
        prices = star_cycle_dual(model)
        primal = lp_solve(model, exact=True).primal
        value, _ = dual_objective(model, prices)
        if value != 2 * n - 5 or not check_dual_certificate(model, list(primal), prices):
            return False, f"n={n}: dual objective {value}, certificate rejected"
        zero = [Fraction(0)] * model.n_rows
        if check_dual_certificate(model, list(primal), zero):
            return False, f"n={n}: all-zero dual accepted"
    return True, "dual feasible with objective 2n-5 for n=3..12"


def check_worked_example(seed):
    """Worked example: FORI, F1, oracle and threshold boundary agree on 5."""
    g, h = worked_example_pair()
    c = unit_costs()
    fori = build_fori(g, h, c)
    s1 = ilp_solve(fori)
    s2 = ilp_solve(build_f1(g, h, c))
    oracle, _ = brute_force_ged(g, h, c)
    path = extract_edit_path(fori, s1)
    thr4 = ilp_solve(add_threshold(fori, 4), "feasibility").status
    thr5 = ilp_solve(add_threshold(fori, 5), "feasibility").status
    kinds = sorted(op.kind for op in path)
    ok = (s1.objective == s2.objective == oracle == 5 and thr4 is IlpStatus.INFEASIBLE
          and thr5 is IlpStatus.FEASIBLE and len(path) == 5 and sum(op.cost for op in path) == 5)
    detail = (f"FORI={s1.objective}, F1={s2.objective}, oracle={oracle}, THR(4)={thr4.value}, "
              f"THR(5)={thr5.value}, path={kinds}")
    return ok, detail


def check_hierarchy(seed, pairs=500):
    """FORILP >= BM >= LS exactly, all <= GED, on random unit-cost pairs."""
    rng = np.random.default_rng(seed)
    c = unit_costs()
    bad = 0
    for _ in range(pairs):
        g, h = random_pair(rng, 7, 10)
        ls = ls_bound(g, h, c).exact
        bm = bm_bound(g, h, c).exact
        lp = fori_lp_bound(g, h, c, exact=True).exact
        ged = brute_force_ged_ticks(g, h, c)[0]
        if not (ls <= bm <= lp <= ged):
            bad += 1
    return bad == 0, f"{pairs} pairs, {bad} violations"


def check_oracle(seed, pairs=200):
    """Optimizing B&B equals brute force; edit paths re-sum to the optimum."""
    rng = np.random.default_rng(seed + 1)
    bad = []
    for c in (unit_costs(), aids_muta_costs()):
        for t in range(pairs):
            g, h = random_pair(rng, 6, 10)
            ged = brute_force_ged_ticks(g, h, c)[0]
            model = build_fori(g, h, c)
            sol = ilp_solve(model)
            path_ticks = sum(op.ticks for op in extract_edit_path(model, sol))
            if sol.status is not IlpStatus.OPTIMAL or sol.ticks != ged or path_ticks != ged:
                bad.append((c.name, t))
    return not bad, f"{pairs} pairs x 2 cost models, {len(bad)} mismatches {bad[:5]}"


def _tau_grid(ged_ticks, k_ticks, scale):
    pts = [Fraction(k_ticks * i, 5) for i in range(6)]
    pts.append(Fraction(ged_ticks))
    pts.append(Fraction(max(ged_ticks - 1, 0)))
    return [p / scale for p in pts]


def check_threshold(seed, pairs=50):
    """Feasibility verdict iff GED <= tau over an 8-point tau grid."""
    rng = np.random.default_rng(seed + 2)
    bad = []
    runs = 0
    for t in range(pairs):
        c = unit_costs() if t % 2 == 0 else aids_muta_costs()
        g, h = random_pair(rng, 6, 8)
        ged = brute_force_ged_ticks(g, h, c)[0]
        model = build_fori(g, h, c)
        k = reduced_costs(g, h, c).K
        for tau in _tau_grid(ged, k, c.scale):
            status = ilp_solve(add_threshold(model, tau), "feasibility").status
            runs += 1
            if (status is IlpStatus.FEASIBLE) != (ged <= tau * c.scale) or status is IlpStatus.ABORTED:
                bad.append((t, float(tau)))
    return not bad, f"{runs} threshold runs, {len(bad)} mismatches {bad[:5]}"


def check_search(seed):
    """Search equals the brute-force filter, is monotone in tau and does not
    depend on the number of worker processes."""
    dataset, queries = synthetic_dataset(seed, size=30, n_queries=3)
    problems = []
    sizes = []
    for q in queries:
        prev = set()
        for tau in range(1, 11):
            r1 = fori_sim(q, dataset, SearchConfig(tau, "unit", jobs=1))
            expect = naive_filter(q, dataset, tau)
            if r1.accepted != expect:
                problems.append(f"{q.name}/tau={tau}: differs from oracle")
            if not prev <= set(r1.accepted):
                problems.append(f"{q.name}/tau={tau}: not monotone")
            prev = set(r1.accepted)
            sizes.append(len(r1.accepted))
            if tau in (2, 5, 8):
                r4 = fori_sim(q, dataset, SearchConfig(tau, "unit", jobs=4))
                if r4.accepted != r1.accepted:
                    problems.append(f"{q.name}/tau={tau}: jobs=4 differs")
    detail = f"3 queries x tau 1..10 on 30 graphs, accepted sizes {min(sizes)}..{max(sizes)}"
    return not problems, detail + ("; " + "; ".join(problems[:5]) if problems else "")


def check_cost_tables(seed):
    """Cost constants of the molecule and protein models."""
    am, pr = aids_muta_costs(), protein_costs()
    table = [
        ("aids node subst", am.node_subst("C", "O"), 5.5),
        ("aids node same", am.node_subst("C", "C"), 0.0),
        ("aids node del", am.node_del("C"), 2.75),
        ("aids node ins", am.node_ins("C"), 2.75),
        ("aids edge subst", am.edge_subst(1, 2), 1.65),
        ("aids edge del", am.edge_del(1), 0.825),
        ("aids edge ins", am.edge_ins(1), 0.825),
        ("protein type mismatch", pr.node_subst((0, "AB"), (1, "AB")), 16.5),
        ("protein LD", pr.node_subst((0, "KITTEN"), (0, "SITTING")), 0.75 * levenshtein("KITTEN", "SITTING")),
        ("protein node del", pr.node_del((0, "A")), 8.25),
        ("protein node ins", pr.node_ins((0, "A")), 8.25),
        ("protein edge same", pr.edge_subst((1, None), (1, None)), 0.0),
        ("protein edge 1v1 differ", pr.edge_subst((1, None), (2, None)), 0.25 * 2),
        ("protein edge 1v2 share", pr.edge_subst((1, None), (1, 2)), 0.25 * 1),
        ("protein edge 2v2 swap", pr.edge_subst((1, 2), (2, 1)), 0.0),
        ("protein edge 2v1 none", pr.edge_subst((1, 2), (3, None)), 0.25 * 3),
        ("protein edge del f=1", pr.edge_del((1, None)), 0.25),
        ("protein edge del f=2", pr.edge_del((1, 2)), 0.5),
        ("protein edge ins f=2", pr.edge_ins((3, 1)), 0.5),
        ("tau multiplier aids", TAU_MULTIPLIERS["aids-muta"], 3.575),
        ("tau multiplier protein", TAU_MULTIPLIERS["protein"], 8.375),
    ]
    bad = [name for name, got, want in table if abs(got - want) > 1e-12]
    return not bad, f"{len(table)} entries, failures: {bad or 'none'}"


def _find_aids_dir():
    base = os.environ.get("GEDSEARCH_DATA_DIR")
    if not base:
        return None
    for cand in ("AIDS", "aids", "AIDS/data", "aids/data"):
        p = Path(base) / cand
        if p.is_dir() and any(p.glob("*.gxl")):
            return p
    return None


def check_scale(seed):
    """Smoke run on a 100-graph molecule sample, when the files are present."""
    root = _find_aids_dir()
    if root is None:
        raise Skip("no AIDS GXL files under $GEDSEARCH_DATA_DIR")
    from .io import read_graph

    files = sorted(root.glob("*.gxl"))[:100]
    dataset = [(p.stem, read_graph(p, "aids")) for p in files]
    q = dataset[0][1]
    c = get_cost_model("aids-muta")
    problems = []
    for mult in (1, 5, 10):
        rep = fori_sim(q, dataset, SearchConfig(mult * TAU_MULTIPLIERS["aids-muta"], c, budget_ms=60000))
        counts = rep.counts
        if rep.coverage < 1.0:
            problems.append(f"mult={mult}: coverage {rep.coverage:.2%}")
        zero = [s for s in (*rep.filter_chain, "THR") if counts[s] == 0]
        if zero:
            problems.append(f"mult={mult}: no discards at {zero}")
    return not problems, "; ".join(problems) or "coverage 100%, every stage filtered"


CHECKS = [
    (1, "star/cycle closed form", check_star_cycle),
    (2, "dual certificate", check_dual),
    (3, "worked example", check_worked_example),
    (4, "bound hierarchy", check_hierarchy),
    (5, "oracle equivalence", check_oracle),
    (6, "threshold correctness", check_threshold),
    (7, "search end-to-end", check_search),
    (8, "non-uniform cost tables", check_cost_tables),
    (9, "dataset scale smoke run", check_scale),
]


def run_check(number: int, seed: int = 0) -> CheckResult:
    num, title, fn = next(entry for entry in CHECKS if entry[0] == number)
    t0 = time.perf_counter()
    try:
        ok, detail = fn(seed)
        status = "PASS" if ok else "FAIL"
    except Skip as s:
        status, detail = "SKIP", str(s)
    except Exception as err:  # reported, not raised: selftest lists every failure
        status, detail = "FAIL", f"{type(err).__name__}: {err}"
    return CheckResult(num, title, status, detail, time.perf_counter() - t0)


def run_all(seed: int = 0, only=None, echo=print) -> list[CheckResult]:
    results = []
    for num, _, _ in CHECKS:
        if only and num not in only:
            continue
        res = run_check(num, seed)
        if echo:
            echo(res.line())
        results.append(res)
    return results

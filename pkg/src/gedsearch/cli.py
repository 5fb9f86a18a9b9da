"""Command-line interface: ``bound``, ``ged``, ``search``, ``bench``,
``synth`` and ``selftest``.

Exit codes: 0 success, 1 usage error, 2 data error, 3 results contain
budget-aborted entries (or a failed self-test).
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from .bb import IlpStatus, extract_edit_path, ilp_solve
from .bounds import InfeasibleFixings, UnsupportedCostModel, compute_bound
from .costs import TAU_MULTIPLIERS, get_cost_model
from .graph import GraphError
from .io import (DirectedUnsupported, MissingLabelAttr, SchemaViolation, XmlMalformed, load_dataset,
                 read_graph, write_dataset, write_report)
from .model import build_f1, build_fori, write_lp
from .oracle import TooLarge, brute_force_ged

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_ABORTED = 0, 1, 2, 3
DATA_ERRORS = (OSError, GraphError, SchemaViolation, XmlMalformed, MissingLabelAttr,
               DirectedUnsupported, TooLarge, InfeasibleFixings)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _emit(obj, out: str | None = None):
    text = json.dumps(obj, indent=1, sort_keys=True) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _ms(t0, args):
    # wall-clock fields are dropped when --seed asks for reproducible output
    return None if args.seed is not None else round((time.perf_counter() - t0) * 1000, 3)


def _jsonable(v):
    if isinstance(v, tuple):
        return [_jsonable(x) for x in v]
    return v


def _anchor(text: str):
    try:
        i, k = text.split(":")
        conv = lambda s: None if s in ("", "-", "eps") else int(s)  # noqa: E731
        return conv(i), conv(k)
    except ValueError:
        raise UsageError(f"anchor must look like I:K, got {text!r}") from None


def cmd_bound(args) -> int:
    c = get_cost_model(args.costs)
    g, h = read_graph(args.g, args.attr_map), read_graph(args.h, args.attr_map)
    kw = {}
    if args.alg == "forilp":
        kw = {"exact": args.exact, "fixed": [_anchor(a) for a in args.anchor] or None}
    elif args.anchor or args.exact:
        raise UsageError("--anchor and --exact apply to forilp only")
    res = compute_bound(args.alg, g, h, c, **kw)
    out = {"algorithm": res.algorithm, "value": res.value, "elapsed_ms": None if args.seed is not None
           else round(res.elapsed * 1000, 3), "certificate": res.as_dict()["certificate"]}
    if res.exact is not None:
        out["exact"] = str(res.exact)
    _emit(out)
    return EXIT_OK


def _path_json(g, h, ops):
    def node(graph, v):
        return None if v is None else _jsonable(graph.original_ids[v])

    def edge(graph, e):
        return None if e is None else [node(graph, e[0]), node(graph, e[1])]

    out = []
    for op in ops:
        if op.kind.endswith("node"):
            src, dst = node(g, op.source), node(h, op.target)
        else:
            src, dst = edge(g, op.source), edge(h, op.target)
        out.append({"op": op.kind, "source": src, "target": dst, "cost": op.cost})
    return out


def cmd_ged(args) -> int:
    c = get_cost_model(args.costs)
    g, h = read_graph(args.g, args.attr_map), read_graph(args.h, args.attr_map)
    t0 = time.perf_counter()
    if args.oracle:
        value, mapping = brute_force_ged(g, h, c)
        _emit({"ged": value, "mapping": [None if k is None else _jsonable(h.original_ids[k]) for k in mapping],
               "elapsed_ms": _ms(t0, args)})
        return EXIT_OK
    model = (build_f1 if args.formulation == "f1" else build_fori)(g, h, c)
    if args.dump_lp:
        write_lp(model, args.dump_lp)
    sol = ilp_solve(model, node_limit=args.node_limit,
                    time_limit=None if args.budget_ms is None else args.budget_ms / 1000.0,
                    seed=args.seed)
    path = extract_edit_path(model, sol) if sol.found else []
    _emit({"ged": sol.objective if sol.status is IlpStatus.OPTIMAL else None,
           "status": sol.status.value, "best_found": sol.objective,
           "edit_path": _path_json(g, h, path), "nodes_explored": sol.node_count,
           "elapsed_ms": _ms(t0, args)})
    return EXIT_OK if sol.status is IlpStatus.OPTIMAL else EXIT_ABORTED


def _tau(args, cost_name: str) -> float:
    if (args.tau is None) == (args.tau_mult is None):
        raise UsageError("give exactly one of --tau and --tau-mult")
    if args.tau is not None:
        return args.tau
    return args.tau_mult * TAU_MULTIPLIERS[cost_name]


def _chain(text):
    return None if not text else tuple(s.strip() for s in text.split(",") if s.strip())


def cmd_search(args) -> int:
    from .search import SearchConfig, fori_sim

    c = get_cost_model(args.costs)
    q = read_graph(args.query, args.attr_map)
    _, dataset = load_dataset(args.dataset)
    cfg = SearchConfig(_tau(args, c.name), c, _chain(args.chain), args.budget_ms, args.node_limit,
                       args.jobs, timings=args.seed is None)
    report = fori_sim(q, dataset, cfg)
    data = write_report(report, "json")
    if args.out:
        Path(args.out).write_bytes(data)
    else:
        sys.stdout.write(data.decode())
    if args.csv:
        Path(args.csv).write_bytes(write_report(report, "csv"))
    return EXIT_ABORTED if report.aborted else EXIT_OK


def cmd_bench(args) -> int:
    from .bench import BENCH_COLUMNS, STAR_CYCLE_COLUMNS, bench_dataset, bench_star_cycle, rows_to_csv

    if args.preset == "star-cycle":
        rows = bench_star_cycle(range(args.n_min, args.n_max + 1), exact=True)
        data = rows_to_csv(rows, STAR_CYCLE_COLUMNS)
        status = EXIT_OK if all(r["ok"] for r in rows) else EXIT_ABORTED
    else:
        if not args.dataset or not args.queries:
            raise UsageError("bench needs --dataset and --queries (or --preset star-cycle)")
        c = get_cost_model(args.costs)
        _, dataset = load_dataset(args.dataset)
        queries = [read_graph(p, args.attr_map) for p in args.queries]
        taus = [float(t) for t in args.taus.split(",")]
        if args.tau_mult:
            taus = [t * TAU_MULTIPLIERS[c.name] for t in taus]
        rows = bench_dataset(queries, dataset, taus, c, jobs=args.jobs, budget_ms=args.budget_ms,
                             node_limit=args.node_limit, timings=args.seed is None)
        data = rows_to_csv(rows, BENCH_COLUMNS)
        status = EXIT_ABORTED if any(r["aborted"] for r in rows) else EXIT_OK
    if args.out:
        Path(args.out).write_bytes(data)
    else:
        sys.stdout.write(data.decode())
    return status


def cmd_synth(args) -> int:
    from .instances import synthetic_dataset
    from .io import write_native

    dataset, queries = synthetic_dataset(args.seed or 0, size=args.size, n_queries=args.queries)
    out = Path(args.out)
    write_dataset(out / "dataset", dataset)
    (out / "queries").mkdir(parents=True, exist_ok=True)
    for q in queries:
        (out / "queries" / f"{q.name}.json").write_bytes(write_native(q))
    _emit({"dataset": str(out / "dataset"), "graphs": len(dataset),
           "queries": [str(out / "queries" / f"{q.name}.json") for q in queries]})
    return EXIT_OK


def cmd_selftest(args) -> int:
    from .acceptance import run_all

    only = {int(s) for s in args.only.split(",")} if args.only else None
    results = run_all(args.seed or 0, only)
    failed = [r for r in results if not r.ok]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed or skipped")
    return EXIT_OK if not failed else EXIT_ABORTED


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="gedsearch", description="Graph edit distance bounds, exact GED and similarity search.")
    p.add_argument("--seed", type=int, default=None,
                   help="fix randomness and omit wall-clock fields, making output byte-reproducible")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    def common(sp, costs=True):
        if costs:
            sp.add_argument("--costs", default="unit", choices=["unit", "aids-muta", "protein"])
        sp.add_argument("--attr-map", default=None, help="GXL attribute preset: aids, muta or protein")

    b = sub.add_parser("bound", help="one lower bound for a pair of graphs")
    b.add_argument("g")
    b.add_argument("h")
    b.add_argument("--alg", required=True, choices=["ls", "bm", "forilp"])
    b.add_argument("--exact", action="store_true", help="rational LP result (forilp)")
    b.add_argument("--anchor", action="append", default=[], metavar="I:K",
                   help="fix node I of G to node K of H (forilp); '-' for deletion/insertion")
    common(b)
    b.set_defaults(func=cmd_bound)

    g = sub.add_parser("ged", help="exact GED with an optimal edit path")
    g.add_argument("g")
    g.add_argument("h")
    g.add_argument("--oracle", action="store_true", help="brute force instead of branch-and-bound")
    g.add_argument("--dump-lp", metavar="PATH", help="write the model in LP format")
    g.add_argument("--formulation", choices=["fori", "f1"], default="fori")
    g.add_argument("--node-limit", type=int)
    g.add_argument("--budget-ms", type=float)
    common(g)
    g.set_defaults(func=cmd_ged)

    s = sub.add_parser("search", help="all dataset graphs within distance tau of a query")
    s.add_argument("--query", required=True)
    s.add_argument("--dataset", required=True)
    s.add_argument("--tau", type=float)
    s.add_argument("--tau-mult", type=float, help="tau as a multiple of the cost model's constant")
    s.add_argument("--chain", help="comma-separated bounds, e.g. LS,BM,FORILP")
    s.add_argument("--jobs", type=int, default=0, help="worker processes (default: all cores)")
    s.add_argument("--budget-ms", type=float, help="time budget per dataset graph")
    s.add_argument("--node-limit", type=int)
    s.add_argument("--csv", metavar="PATH", help="also write the per-graph CSV table")
    s.add_argument("--out", metavar="PATH", help="write the JSON report here instead of stdout")
    common(s)
    s.set_defaults(func=cmd_search)

    be = sub.add_parser("bench", help="per-query, per-tau statistics as CSV")
    be.add_argument("--preset", choices=["star-cycle"])
    be.add_argument("--n-min", type=int, default=3)
    be.add_argument("--n-max", type=int, default=12)
    be.add_argument("--dataset")
    be.add_argument("--queries", nargs="*")
    be.add_argument("--taus", default="1,2,3")
    be.add_argument("--tau-mult", action="store_true", help="read --taus as multipliers")
    be.add_argument("--jobs", type=int, default=1)
    be.add_argument("--budget-ms", type=float)
    be.add_argument("--node-limit", type=int)
    be.add_argument("--out", metavar="PATH")
    common(be)
    be.set_defaults(func=cmd_bench)

    sy = sub.add_parser("synth", help="write a seeded synthetic dataset and queries")
    sy.add_argument("--out", required=True)
    sy.add_argument("--size", type=int, default=30)
    sy.add_argument("--queries", type=int, default=3)
    sy.set_defaults(func=cmd_synth)

    st = sub.add_parser("selftest", help="run the acceptance checks")
    st.add_argument("--only", help="comma-separated check numbers")
    st.set_defaults(func=cmd_selftest)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, UnsupportedCostModel) as err:
        print(f"gedsearch: error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except DATA_ERRORS as err:
        print(f"gedsearch: data error: {err}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())

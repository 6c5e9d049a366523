"""Command-line front end: ``solve``, ``brute``, ``sweep``, ``converge`` and ``verify``.

Exit codes: 0 success, 1 solver or oracle failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import data_io, dca, oracle, verify
from .gauges import make_gauge
from .init import STRATEGIES


def _default_threads() -> int:
    env = os.environ.get("BILEVEL_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def _add_data_args(p):
    src = p.add_argument_group("data").add_mutually_exclusive_group(required=True)
    src.add_argument("--input", metavar="PATH",
                     help="TSPLIB (.tsp) or CSV file; 'eil76' loads the bundled copy")
    src.add_argument("--gen", metavar="SPEC",
                     help="uniform:M:N[:SEED], synthetic1002[:SEED], artificial11 or artificial15")


def _add_problem_args(p, k_required=True):
    p.add_argument("--model", type=int, choices=(1, 2), required=True)
    if k_required:
        p.add_argument("--k", type=int, required=True, help="number of cluster centers")
    p.add_argument("--gauge", choices=("l2", "l1"), default="l2")
    _add_data_args(p)


def _add_solver_args(p):
    d = dca.SolverParams()
    p.add_argument("--init", choices=STRATEGIES, default="kmeans")
    p.add_argument("--restarts", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mu0", type=float, default=d.mu0)
    p.add_argument("--lambda0", type=float, default=d.lambda0)
    p.add_argument("--sigma1", type=float, default=d.sigma1)
    p.add_argument("--sigma2", type=float, default=d.sigma2)
    p.add_argument("--mu-min", type=float, default=d.mu_min)
    p.add_argument("--max-inner", type=int, default=d.max_inner)
    p.add_argument("--tol", type=float, default=d.step_tol, help="inner step tolerance")
    p.add_argument("--threads", type=int, default=None,
                   help="worker processes (default: $BILEVEL_THREADS or CPU count)")
    p.add_argument("--timing", action="store_true",
                   help="record wall time in the results file (makes output run-dependent)")


def _add_output_args(p):
    p.add_argument("--out", metavar="PATH", help="write results here")
    p.add_argument("--format", choices=("csv", "json"), default="csv")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bilevel", description="Bilevel hierarchical clustering via DCA and smoothing.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="multi-start DCA solve")
    _add_problem_args(p)
    _add_solver_args(p)
    _add_output_args(p)
    p.add_argument("--svg", metavar="PATH", help="scatter plot of nodes and chosen centers")

    p = sub.add_parser("sweep", help="solve for several k values and init strategies")
    _add_problem_args(p, k_required=False)
    p.add_argument("--ks", required=True, help="comma-separated k values, e.g. 2,3,4")
    p.add_argument("--inits", default="kmeans", help="comma-separated init strategies")
    _add_solver_args(p)
    _add_output_args(p)

    p = sub.add_parser("brute", help="exhaustive search over node subsets")
    _add_problem_args(p)
    p.add_argument("--cap", type=int, default=oracle.DEFAULT_CAP)
    p.add_argument("--threads", type=int, default=None)
    _add_output_args(p)

    p = sub.add_parser("converge", help="run from every node subset, compare with brute force")
    _add_problem_args(p)

    p = sub.add_parser("verify", help="numerical property suites")
    p.add_argument("--suite", action="append", choices=sorted(verify.SUITES),
                   help="run only this suite (repeatable)")
    p.add_argument("--seed", type=int, default=0)
    return parser


def _load(args, parser) -> data_io.Dataset:
    try:
        if args.gen:
            return data_io.parse_gen_spec(args.gen)
        return data_io.load_dataset(args.input)
    except (OSError, ValueError) as exc:
        parser.exit(1, f"bilevel: cannot load data: {exc}\n")


def _check_k(parser, model, k, ds):
    rows = k if model == 1 else k + 1
    if k < 1 or rows > ds.m:
        parser.error(f"--k {k} needs {rows} distinct centers but the data has {ds.m} nodes")


def _params(args, parser) -> dca.SolverParams:
    if args.restarts < 1:
        parser.error("--restarts must be positive")
    try:
        return dca.SolverParams(
            mu0=args.mu0, lambda0=args.lambda0, sigma1=args.sigma1, sigma2=args.sigma2,
            mu_min=args.mu_min, max_inner=args.max_inner, step_tol=args.tol,
            restarts=args.restarts, seed=args.seed, record_trace=False,
        )
    except ValueError as exc:
        parser.error(str(exc))


def _threads(args) -> int:
    return args.threads if args.threads is not None else _default_threads()


def _emit(rows, args):
    text = data_io.write_results(rows, args.format)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)


def _rows_for(ds, result, k, args, params):
    rows = []
    for run in result.runs or [result]:
        row = data_io.result_row(ds, run, k, args.init, args.gauge, params)
        if not args.timing:
            row["time_s"] = None
        rows.append(row)
    return rows


def _print_run(run):
    print(f"  seed={run.seed:<6d} cost={run.discrete_cost:12.4f} "
          f"continuous={run.continuous_cost:12.4f} iters={run.total_inner_iterations:<6d} "
          f"centers={run.snapped_center_indices} total={run.total_center_index}")


def write_svg(path, ds, result, size=480):
    """Scatter of the first two coordinates: nodes, centers, total center."""
    pts = ds.points[:, :2] if ds.n >= 2 else np.column_stack([ds.points[:, 0], np.zeros(ds.m)])
    lo, hi = pts.min(axis=0), pts.max(axis=0)
    span = np.where(hi > lo, hi - lo, 1.0)
    xy = 20 + (pts - lo) / span * (size - 40)
    xy[:, 1] = size - xy[:, 1]
    centers = set(result.snapped_center_indices)
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}">',
           f'<rect width="{size}" height="{size}" fill="white"/>']
    for i, (x, y) in enumerate(xy):
        if i == result.total_center_index:
            out.append(f'<rect x="{x - 6:.1f}" y="{y - 6:.1f}" width="12" height="12" fill="crimson"/>')
        elif i in centers:
            out.append(f'<circle cx="{x:.1f}" cy="{y:.1f}" r="6" fill="royalblue"/>')
        else:
            out.append(f'<circle cx="{x:.1f}" cy="{y:.1f}" r="2.5" fill="gray"/>')
    out.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(out) + "\n")


def cmd_solve(args, parser) -> int:
    ds = _load(args, parser)
    _check_k(parser, args.model, args.k, ds)
    params = _params(args, parser)
    gauge = make_gauge(args.gauge, ds.n)
    try:
        result = dca.solve(args.model, ds.points, args.k, gauge, params, args.init,
                           threads=_threads(args))
    except (dca.NonFiniteIterate, ValueError) as exc:
        print(f"bilevel: solve failed: {exc}", file=sys.stderr)
        return 1
    print(f"{ds.name}: model {args.model}, k={args.k}, gauge {args.gauge}, "
          f"init {args.init}, {params.restarts} restart(s)")
    for run in result.runs:
        _print_run(run)
    print(f"best: seed={result.seed} cost={result.discrete_cost:.4f} "
          f"centers={result.snapped_center_indices} total={result.total_center_index}")
    _emit(_rows_for(ds, result, args.k, args, params), args)
    if args.svg:
        write_svg(args.svg, ds, result)
    return 0


def cmd_sweep(args, parser) -> int:
    ds = _load(args, parser)
    try:
        ks = [int(v) for v in args.ks.split(",")]
    except ValueError:
        parser.error(f"--ks expects integers, got {args.ks!r}")
    inits = args.inits.split(",")
    for name in inits:
        if name not in STRATEGIES:
            parser.error(f"unknown init {name!r}; choose from {', '.join(STRATEGIES)}")
    for k in ks:
        _check_k(parser, args.model, k, ds)
    params = _params(args, parser)
    gauge = make_gauge(args.gauge, ds.n)
    rows = []
    print(f"{'k':>3} {'init':>8} {'best cost':>12} {'iters':>7}  centers")
    for k in ks:
        for name in inits:
            args.init = name
            try:
                result = dca.solve(args.model, ds.points, k, gauge, params, name,
                                   threads=_threads(args))
            except (dca.NonFiniteIterate, ValueError) as exc:
                print(f"bilevel: solve failed for k={k}, init={name}: {exc}", file=sys.stderr)
                return 1
            print(f"{k:>3} {name:>8} {result.discrete_cost:12.4f} "
                  f"{result.total_inner_iterations:7d}  {result.snapped_center_indices}")
            rows.extend(_rows_for(ds, result, k, args, params))
    _emit(rows, args)
    return 0


def cmd_brute(args, parser) -> int:
    ds = _load(args, parser)
    _check_k(parser, args.model, args.k, ds)
    gauge = make_gauge(args.gauge, ds.n)
    try:
        best = oracle.brute_force(args.model, ds.points, args.k, gauge, cap=args.cap,
                                  threads=_threads(args))
    except oracle.TooManyCombinations as exc:
        print(f"bilevel: refusing: {exc}", file=sys.stderr)
        return 1
    print(f"{ds.name}: model {args.model}, k={args.k}, gauge {args.gauge}, "
          f"{best.count} subsets")
    print(f"optimal centers={list(best.indices)} cost={best.cost:.4f} "
          f"total={best.total_center}")
    if args.out:
        row = {"dataset": ds.name, "model": args.model, "cost": round(best.cost, 6),
               "continuous_cost": None, "iterations": 0, "time_s": None, "k": args.k,
               "m": ds.m, "n": ds.n, "seed": None, "init": "brute", "gauge": args.gauge,
               "centers": list(best.indices), "total_center": best.total_center,
               "params": {"cap": args.cap, "subsets": best.count}}
        _emit([row], args)
    return 0


def cmd_converge(args, parser) -> int:
    ds = _load(args, parser)
    _check_k(parser, args.model, args.k, ds)
    gauge = make_gauge(args.gauge, ds.n)
    try:
        study = dca.convergence_study(args.model, ds.points, args.k, gauge)
    except oracle.TooManyCombinations as exc:
        print(f"bilevel: refusing: {exc}", file=sys.stderr)
        return 1
    print(f"{ds.name}: optimum {study.optimum.cost:.4f} at {list(study.optimum.indices)}")
    print(f"{study.hits}/{study.starts} starts reached it ({100 * study.rate:.1f}%)")
    return 0


def cmd_verify(args, parser) -> int:
    reports = verify.run_suites(args.suite, seed=args.seed)
    for rep in reports:
        status = "PASS" if rep.ok else "FAIL"
        print(f"{status} {rep.name:<12} checks={rep.checks:<6d} failures={rep.failures:<5d} "
              f"worst={rep.worst:.3g} ({rep.seconds:.2f}s)")
        for msg in rep.messages:
            print(f"     {msg}")
    passed = sum(r.ok for r in reports)
    print(f"{passed}/{len(reports)} suites passed")
    return 0 if passed == len(reports) else 1


COMMANDS = {
    "solve": cmd_solve,
    "sweep": cmd_sweep,
    "brute": cmd_brute,
    "converge": cmd_converge,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return COMMANDS[args.command](args, parser)


if __name__ == "__main__":
    sys.exit(main())

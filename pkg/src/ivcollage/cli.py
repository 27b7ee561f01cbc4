"""Command line: ``ivcollage {forward,inverse,reproduce}``.

Exit codes: 0 success, 2 configuration error, 3 numerical non-convergence.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
import warnings
from pathlib import Path

from sklearn.exceptions import ConvergenceWarning

from ._validation import check_level, check_stopping
from .config import ConfigError, load_family, load_problem
from .interval import IntervalError
from .inverse import minimize
from .ivfun import DomainError, EvalGrid, metric_h, read_csv, write_csv
from .problems import TABLE_GRID, reproduce_row
from .volterra import apply_phi, caccioppoli_tail, collage_certificate, solve_forward

log = logging.getLogger("ivcollage")

EXIT_OK, EXIT_CONFIG, EXIT_NONCONVERGED = 0, 2, 3
MAX_LEVEL = 6


def _dump_json(obj, path: Path) -> None:
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def run_forward(args) -> int:
    problem = load_problem(args.problem)
    level = check_level(args.level, low=1, high=MAX_LEVEL)
    m, eps = check_stopping(args.m, args.eps)
    if args.eval_grid < 2**level + 1:
        raise ConfigError(f"--eval-grid must be at least q = {2**level + 1}")
    grid = EvalGrid.uniform(problem.domain, args.eval_grid)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ConvergenceWarning)
        res = solve_forward(problem, level, eps=eps, m=m, max_iter=args.max_iter)

    out = Path(args.out)
    write_csv(res.solution, out)

    a, b = problem.domain
    L = problem.lipschitz
    X = res.solution
    Y = apply_phi(problem, X, level)
    # level k vs k + 2 image of the final iterate stands in for the projection error
    eps_proj = metric_h(Y, apply_phi(problem, X, level + 2), grid)
    first_step = res.distances[0]
    report = {
        "level": level,
        "n": (2**level + 1) ** 2,
        "stopping": {"m": m} if m is not None else {"eps": eps, "max_iter": args.max_iter},
        "iterations": res.n_iter,
        "converged": res.converged,
        "successive_distances": res.distances,
        "final_distance": res.distance,
        "lipschitz": L,
        "caccioppoli_tail_bound": caccioppoli_tail(L, a, b, res.n_iter) * first_step,
        "collage_distance": metric_h(X, Y, grid),
        "eps_proj": eps_proj,
        "certificate": collage_certificate(problem, X, Y, eps_proj, grid),
    }
    report_path = Path(args.report) if args.report else out.with_suffix(".json")
    _dump_json(report, report_path)
    log.info("wrote %s and %s", out, report_path)
    if not res.converged:
        print(f"error: no convergence after {res.n_iter} iterations "
              f"(last successive distance {res.distance:.3e})", file=sys.stderr)
        return EXIT_NONCONVERGED
    return EXIT_OK


def run_inverse(args) -> int:
    family = load_family(args.family)
    try:
        target = read_csv(args.target)
    except FileNotFoundError:
        raise ConfigError(f"{args.target}: file not found") from None
    level = args.level if args.level is not None else target.level
    if level is None:
        raise ConfigError("target nodes are not dyadic; pass --level explicitly")
    level = check_level(level, low=1, high=MAX_LEVEL)
    if tuple(target.domain) != tuple(family.domain):
        raise ConfigError(f"target covers {target.domain}, family domain is {family.domain}")
    grid = EvalGrid.uniform(family.domain, args.eval_grid)
    res = minimize(family, target, level, grid)
    _dump_json(res.to_dict(), Path(args.out))
    return EXIT_OK


def run_reproduce(args) -> int:
    combos = TABLE_GRID[args.example]
    if args.m is not None:
        combos = [c for c in combos if c[0] == args.m]
    if args.level is not None:
        combos = [c for c in combos if c[1] == args.level]
    if not combos:
        raise ConfigError(
            f"no benchmark row for example {args.example} with m={args.m}, level={args.level}; "
            f"available (m, level): {TABLE_GRID[args.example]}"
        )
    rows = [reproduce_row(args.example, m, k, args.eval_grid) for m, k in combos]
    fh = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["m", "n", "r", "alpha", "beta", "H"])
        for r in rows:
            w.writerow([r["m"], r["n"], r["r"], f"{r['alpha']:.17g}", f"{r['beta']:.17g}", f"{r['H']:.17g}"])
    finally:
        if fh is not sys.stdout:
            fh.close()
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ivcollage", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    f = sub.add_parser("forward", help="Picard solve of a Volterra interval equation")
    f.add_argument("--problem", required=True, type=Path)
    f.add_argument("--level", type=int, default=3, help="dyadic level k (n = (2^k+1)^2)")
    f.add_argument("--m", type=int, help="fixed number of iterations")
    f.add_argument("--eps", type=float, help="successive-distance tolerance")
    f.add_argument("--max-iter", type=int, default=100)
    f.add_argument("--eval-grid", type=int, default=1025)
    f.add_argument("--out", required=True, type=Path, help="solution CSV")
    f.add_argument("--report", type=Path, help="report JSON (default: OUT with .json suffix)")
    f.set_defaults(func=run_forward)

    i = sub.add_parser("inverse", help="collage parameter identification")
    i.add_argument("--family", required=True, type=Path)
    i.add_argument("--target", required=True, type=Path)
    i.add_argument("--level", type=int, help="dyadic level k (default: that of the target)")
    i.add_argument("--eval-grid", type=int, default=1025)
    i.add_argument("--out", required=True, type=Path, help="result JSON")
    i.set_defaults(func=run_inverse)

    r = sub.add_parser("reproduce", help="regenerate rows of the benchmark tables")
    r.add_argument("--example", type=int, choices=[1, 2], required=True)
    r.add_argument("--m", type=int)
    r.add_argument("--level", type=int)
    r.add_argument("--eval-grid", type=int, default=1025)
    r.add_argument("--out", type=Path, help="CSV path (default: stdout)")
    r.set_defaults(func=run_reproduce)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ConfigError, IntervalError, DomainError, ValueError, TypeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())

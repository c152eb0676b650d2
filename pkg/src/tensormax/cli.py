"""Command line interface: simulate / test / diagnose / quantile.

Results go to stdout as JSON (or a bare number for quantile); the
resolved configuration, including the seed, is logged to stderr.  Seeds
default to the fixed constant DEFAULT_MASTER_SEED so that repeated
invocations are reproducible; pass --seed for fresh randomness.

Exit codes: 0 success, 2 usage or validation error, 3 budget error,
4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import diagnostics, hypotest, lab, statcore
from .asymptotics import ONE_SIDED, TWO_SIDED, GumbelLimit
from .populations import FAMILIES, PopulationSpec, SeedSpec
from .statcore import BudgetError

DEFAULT_MASTER_SEED = 12345

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_BUDGET = 3
EXIT_IO = 4

_SIDED = {"two": TWO_SIDED, "one": ONE_SIDED}


def _log_config(name: str, resolved: dict) -> None:
    print(f"tensormax {name} config: {json.dumps(resolved, sort_keys=True)}", file=sys.stderr)


def _population(args) -> PopulationSpec:
    return PopulationSpec(family=args.population, df=args.df)


def _seed(args) -> SeedSpec:
    return SeedSpec(master_seed=args.seed, stream_id=args.stream)


def _add_seed_flags(sub) -> None:
    sub.add_argument("--seed", type=int, default=DEFAULT_MASTER_SEED,
                     help=f"master seed, unsigned 64-bit (default {DEFAULT_MASTER_SEED})")
    sub.add_argument("--stream", type=int, default=0,
                     help="stream id / replicate index (default 0)")
    sub.add_argument("--workers", type=int, default=1,
                     help="parallel workers; results are identical for any value (default 1)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tensormax",
        description="Largest off-diagonal entry of sample random tensors: "
                    "statistics, limit law, tests and diagnostics.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    q = subs.add_parser("quantile", help="closed-form quantile or CDF of the limit law")
    q.add_argument("--m", type=int, required=True, help="tensor order, 2..20")
    q.add_argument("--sided", choices=("two", "one"), default="two",
                   help="two-sided (absolute max) or one-sided (signed max) law (default two)")
    group = q.add_mutually_exclusive_group(required=True)
    group.add_argument("--q", type=float, help="probability in (0,1); prints the quantile")
    group.add_argument("--z", type=float, help="point at which to print the CDF")

    t = subs.add_parser("test", help="independence test from CSV data")
    t.add_argument("--input", nargs="+", required=True, metavar="CSV",
                   help="headerless CSV matrix; several files run the multi-population test")
    t.add_argument("--m", type=int, help="tensor order (required for a single input; "
                                         "defaults to the number of inputs otherwise)")
    t.add_argument("--sided", choices=("two", "one"), default="two",
                   help="sidedness of the statistic and limit (default two)")
    t.add_argument("--studentize", action="store_true",
                   help="center/scale columns empirically first; heuristic, "
                        "outside the variance-1 theory")
    t.add_argument("--cost-ceiling", type=int, default=statcore.DEFAULT_COST_CEILING,
                   help="multiply-add budget for the enumeration (default 1e10)")
    t.add_argument("--workers", type=int, default=1,
                   help="parallel workers; results identical for any value (default 1)")

    d = subs.add_parser("diagnose", help="Monte Carlo diagnostics of the limit ingredients")
    d.add_argument("--what", choices=("lambda", "b1", "pairtail", "mdr"), required=True)
    d.add_argument("--z", type=float, default=0.0, help="tail parameter z (lambda; default 0)")
    d.add_argument("--n", type=int, help="sample size per replicate")
    d.add_argument("--p", type=int, help="number of coordinates")
    d.add_argument("--m", type=int, help="tensor order")
    d.add_argument("--population", choices=FAMILIES, default="standard_normal",
                   help="population family (default standard_normal)")
    d.add_argument("--df", type=int, default=None, help="degrees of freedom (student t only)")
    d.add_argument("--reps", type=int, default=10**5, help="Monte Carlo replicates (default 1e5)")
    d.add_argument("--s", type=int, help="shared-coordinate count, 1..m-1 (pairtail)")
    d.add_argument("--a", type=float, help="threshold multiplier a_n > 0 (pairtail)")
    d.add_argument("--x", type=float, help="tail point x >= 0 (mdr)")
    d.add_argument("--single-tail", type=float, dest="single_tail",
                   help="tail probability in [0,1] (b1)")
    _add_seed_flags(d)

    s = subs.add_parser("simulate", help="run a replicated experiment grid from a JSON config")
    s.add_argument("--config", required=True, help="path to the experiment config JSON")
    s.add_argument("--output", help="output directory (overrides the config's output_path)")
    s.add_argument("--workers", type=int, default=1,
                   help="parallel workers per cell; output bytes identical for any value")
    return parser


def _require(args, names: list[str]) -> None:
    for name in names:
        if getattr(args, name, None) is None:
            raise ValueError(f"--{name.replace('_', '-')} is required for this diagnose mode")


def _cmd_quantile(args) -> int:
    limit = GumbelLimit(args.m, _SIDED[args.sided])
    if args.q is not None:
        _log_config("quantile", {"m": args.m, "sided": args.sided, "q": args.q})
        value = limit.quantile(args.q)
    else:
        _log_config("quantile", {"m": args.m, "sided": args.sided, "z": args.z})
        value = limit.cdf(args.z)
    print(f"{value:.12g}")
    return EXIT_OK


def _studentized(A: np.ndarray) -> np.ndarray:
    sd = np.std(A, axis=0, ddof=1)
    if np.any(sd == 0.0):
        raise ValueError("cannot studentize: some column has zero sample variance")
    return (A - np.mean(A, axis=0)) / sd


def _cmd_test(args) -> int:
    matrices = [statcore.load_matrix_csv(path) for path in args.input]
    if args.studentize:
        matrices = [_studentized(A) for A in matrices]
    resolved = {
        "input": list(args.input),
        "m": args.m,
        "sided": args.sided,
        "studentize": args.studentize,
        "cost_ceiling": args.cost_ceiling,
        "workers": args.workers,
    }
    _log_config("test", resolved)
    if len(matrices) == 1:
        if args.m is None:
            raise ValueError("--m is required when testing a single input matrix")
        result = hypotest.test_independence(
            matrices[0], args.m, sided=_SIDED[args.sided],
            workers=args.workers, cost_ceiling=args.cost_ceiling,
        )
    else:
        if args.m is not None and args.m != len(matrices):
            raise ValueError(
                f"--m {args.m} conflicts with {len(matrices)} input matrices "
                f"(the multi-population order is the number of matrices)"
            )
        result = hypotest.test_independence_multi(
            matrices, sided=_SIDED[args.sided],
            workers=args.workers, cost_ceiling=args.cost_ceiling,
        )
    print(json.dumps(result.to_json(), indent=2))
    return EXIT_OK


def _cmd_diagnose(args) -> int:
    spec = _population(args)
    seed = _seed(args)
    resolved = {
        "what": args.what,
        "population": spec.to_json(),
        "seed": seed.to_json(),
        "reps": args.reps,
        "workers": args.workers,
    }
    if args.what == "lambda":
        _require(args, ["n", "p", "m"])
        resolved.update({"z": args.z, "n": args.n, "p": args.p, "m": args.m})
        _log_config("diagnose", resolved)
        report = diagnostics.estimate_lambda(
            args.z, args.n, args.p, args.m, spec, args.reps, seed, workers=args.workers
        )
        print(json.dumps(report.to_json(), indent=2))
    elif args.what == "b1":
        _require(args, ["p", "m", "single_tail"])
        resolved.update({"p": args.p, "m": args.m, "single_tail": args.single_tail})
        _log_config("diagnose", resolved)
        value = diagnostics.b1_bound(args.p, args.m, args.single_tail)
        print(json.dumps({"p": args.p, "m": args.m, "single_tail": args.single_tail,
                          "b1_bound": value}, indent=2))
    elif args.what == "pairtail":
        _require(args, ["s", "a", "n", "p", "m"])
        resolved.update({"s": args.s, "a": args.a, "n": args.n, "p": args.p, "m": args.m})
        _log_config("diagnose", resolved)
        pspec = diagnostics.PairTailSpec(s=args.s, a_n=args.a, n=args.n, p=args.p,
                                         m=args.m, spec=spec)
        est = diagnostics.estimate_pair_tail(pspec, args.reps, seed, workers=args.workers)
        out = {
            "spec": {"s": args.s, "a_n": args.a, "n": args.n, "p": args.p, "m": args.m,
                     "population": spec.to_json()},
            "estimate": est.to_json(),
            "analytic_decay": diagnostics.pair_tail_decay_exponents(pspec),
        }
        print(json.dumps(out, indent=2))
    else:  # mdr
        _require(args, ["n", "m", "x"])
        resolved.update({"x": args.x, "n": args.n, "m": args.m})
        _log_config("diagnose", resolved)
        report = diagnostics.moderate_deviation_ratio(
            spec, args.m, args.n, args.x, args.reps, seed, workers=args.workers
        )
        print(json.dumps(report.to_json(), indent=2))
    return EXIT_OK


def _cmd_simulate(args) -> int:
    try:
        with open(args.config, encoding="utf-8") as fh:
            obj = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ValueError(f"config {args.config} is not valid JSON: {exc}") from exc
    except OSError as exc:
        raise OSError(f"cannot read config {args.config}: {exc}") from exc
    try:
        config = lab.ExperimentConfig.from_json(obj)
    except (KeyError, TypeError) as exc:
        raise ValueError(f"config {args.config} is missing or mistypes a field: {exc}") from exc
    if args.output is not None:
        config = lab.ExperimentConfig(
            grid=config.grid, reps=config.reps, master_seed=config.master_seed,
            z_grid=config.z_grid, output_path=args.output,
        )
    _log_config("simulate", {"config": config.to_json(), "workers": args.workers})
    report = lab.run_experiment(config, workers=args.workers)
    print(json.dumps({"cells": [c.to_json() for c in report.cells],
                      "records": len(report.records),
                      "output_path": config.output_path}, indent=2))
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "quantile": _cmd_quantile,
        "test": _cmd_test,
        "diagnose": _cmd_diagnose,
        "simulate": _cmd_simulate,
    }
    try:
        return handlers[args.command](args)
    except BudgetError as exc:
        print(f"tensormax: budget error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except ValueError as exc:
        print(f"tensormax: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"tensormax: io error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end: sampling, fitting, benchmarking, GOF, density export.

Subcommands
-----------
sample    draw pairs from the distribution and write a pairs file
fit       estimate parameters from a pairs file (optionally SEs and GOF)
mc        run the Monte Carlo benchmark and write a report file
density   export a density grid for external plotting
rainfall  convert an annual series into overlapping two-year pairs

Conventions: data goes to stdout or ``--out``; diagnostics go to stderr.
Machine-readable results are flat ``key=value`` lines.  Exit codes:
0 success, 2 usage/validation error, 3 estimation degeneracy, 4 I/O error.
Every subcommand is deterministic given its flags.  The default ``--seed``
is 42, overridable through the ``MCKAYGAMMA_SEED`` environment variable
(an explicit flag always wins).
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import estimators, inference, montecarlo
from .errors import DomainError, EstimationError, NumericRangeError
from .ingest import (
    load_rainfall_series,
    read_pairs,
    read_series,
    rainfall_pairs,
    write_density_grid,
    write_pairs,
    write_report,
)
from .model import BivariateSample, McKayParams, density_grid, sample_mckay

__all__ = ["main", "build_parser"]

_METHODS = ("ml", "zhao", "nawa", "proposed1", "proposed2")


def _default_seed() -> int:
    return int(os.environ.get("MCKAYGAMMA_SEED", "42"))


def _positive_float(text: str) -> float:
    value = float(text)
    if not np.isfinite(value) or value <= 0.0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text!r}")
    return value


def _positive_int(text: str) -> int:
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mckay-gamma",
        description="Estimation toolkit for McKay's bivariate gamma distribution.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument(
            "--seed",
            type=int,
            default=_default_seed(),
            help="RNG seed (default 42; MCKAYGAMMA_SEED overrides the default)",
        )
        p.add_argument(
            "--out",
            default=None,
            help="output path (default: stdout)",
        )

    p = sub.add_parser("sample", help="draw pairs and write a pairs file")
    p.add_argument("--alpha", type=_positive_float, required=True)
    p.add_argument("--beta", type=_positive_float, required=True)
    p.add_argument("--gamma", type=_positive_float, required=True)
    p.add_argument("--n", type=_positive_int, required=True)
    add_common(p)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("fit", help="estimate parameters from a pairs file")
    p.add_argument("--input", required=True, help="pairs file (header x,y)")
    p.add_argument("--method", required=True, choices=_METHODS)
    p.add_argument("--r", type=float, default=None, help="transform exponent r")
    p.add_argument("--s", type=float, default=None, help="transform exponent s")
    p.add_argument(
        "--profile",
        action="store_true",
        help="select (r, s) by profile log-likelihood on the grid",
    )
    p.add_argument("--grid-min", type=float, default=0.1)
    p.add_argument("--grid-max", type=float, default=2.5)
    p.add_argument("--grid-step", type=float, default=0.1)
    p.add_argument("--se", choices=("none", "bootstrap"), default="none")
    p.add_argument("--boot-b", type=_positive_int, default=2000)
    p.add_argument(
        "--block-len",
        type=_positive_int,
        default=None,
        help="bootstrap block length (default: ceil(n^(1/3)))",
    )
    p.add_argument("--gof", action="store_true", help="run the Rosenblatt CvM test")
    p.add_argument("--gof-b", type=_positive_int, default=3000)
    add_common(p)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("mc", help="run the Monte Carlo benchmark")
    p.add_argument(
        "--preset",
        choices=("paper",),
        default=None,
        help="run the full benchmark design (4 scenarios x {20,50,100} x 5 methods)",
    )
    p.add_argument("--alpha", type=_positive_float, default=None)
    p.add_argument("--beta", type=_positive_float, default=None)
    p.add_argument("--gamma", type=_positive_float, default=None)
    p.add_argument("--n", type=_positive_int, default=None)
    p.add_argument("--reps", type=_positive_int, default=1000)
    p.add_argument(
        "--methods",
        nargs="+",
        choices=_METHODS,
        default=list(_METHODS),
        help="methods to benchmark (default: all five)",
    )
    p.add_argument("--jobs", type=_positive_int, default=1)
    add_common(p)
    p.set_defaults(func=cmd_mc)

    p = sub.add_parser("density", help="export a density grid for plotting")
    p.add_argument("--alpha", type=_positive_float, required=True)
    p.add_argument("--beta", type=_positive_float, required=True)
    p.add_argument("--gamma", type=_positive_float, required=True)
    p.add_argument("--x-max", type=_positive_float, required=True)
    p.add_argument("--y-max", type=_positive_float, required=True)
    p.add_argument("--resolution", type=_positive_int, required=True)
    add_common(p)
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("rainfall", help="annual series -> overlapping two-year pairs")
    p.add_argument(
        "--input",
        default=None,
        help="one-column series file (default: bundled Los Angeles series)",
    )
    add_common(p)
    p.set_defaults(func=cmd_rainfall)

    return parser


def _emit(lines, out_path):
    text = "".join(f"{k}={v}\n" for k, v in lines)
    if out_path is None or out_path == "-":
        sys.stdout.write(text)
    else:
        with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def cmd_sample(args) -> int:
    params = McKayParams(args.alpha, args.beta, args.gamma)
    sample = sample_mckay(params, args.n, args.seed)
    write_pairs(sample, args.out)
    return 0


def _fit_grid(args) -> tuple:
    if args.grid_step <= 0 or args.grid_max < args.grid_min or args.grid_min <= 0:
        raise DomainError("grid requires 0 < grid-min <= grid-max and grid-step > 0")
    k = int(round((args.grid_max - args.grid_min) / args.grid_step))
    values = [round(args.grid_min + i * args.grid_step, 10) for i in range(k + 1)]
    return tuple(v for v in values if v <= args.grid_max + 1e-9)


def _dispatch_fit(args, sample: BivariateSample) -> estimators.EstimateResult:
    method = args.method
    wants_rs = method in ("proposed1", "proposed2")
    if not wants_rs and (args.r is not None or args.s is not None or args.profile):
        raise DomainError(f"--r/--s/--profile do not apply to method {method!r}")
    if method == "ml":
        return estimators.estimate_ml(sample)
    if method == "zhao":
        return estimators.estimate_zhao(sample)
    if method == "nawa":
        return estimators.estimate_nawa(sample)
    if args.profile:
        if args.r is not None or args.s is not None:
            raise DomainError("--profile and explicit --r/--s are mutually exclusive")
        grid = _fit_grid(args)
        return estimators.profile_select(sample, method, grid_r=grid, grid_s=grid)
    if args.r is None or args.s is None:
        raise DomainError(
            f"method {method!r} needs either --profile or both --r and --s"
        )
    if method == "proposed1":
        return estimators.estimate_proposed1(sample, args.r, args.s)
    return estimators.estimate_proposed2(sample, args.r, args.s)


def cmd_fit(args) -> int:
    sample = read_pairs(args.input)
    fit = _dispatch_fit(args, sample)

    record = [("method", fit.method), ("n", sample.n)]
    record += [
        ("alpha", _fmt(fit.alpha)),
        ("beta", _fmt(fit.beta)),
        ("gamma", _fmt(fit.gamma_rate)),
    ]
    if fit.r is not None:
        record += [("r", _fmt(fit.r)), ("s", _fmt(fit.s))]
    record.append(("loglik", _fmt(fit.loglik)))
    record.append(("converged", _fmt(fit.converged)))
    if fit.iterations is not None:
        record.append(("iterations", fit.iterations))
    if fit.profile_skipped is not None:
        record.append(("profile_skipped", fit.profile_skipped))

    usable = fit.converged and fit.params is not None
    if not usable:
        print(
            "warning: estimate did not converge; skipping SE/GOF stages",
            file=sys.stderr,
        )

    if args.se == "bootstrap" and usable:
        block_len = args.block_len
        if block_len is None:
            block_len = inference.default_block_len(sample.n)
        # Profiled fits bootstrap the plug-in estimator at the selected
        # (r, s): re-running the grid search inside every replicate would
        # estimate the SE of a different (much slower) procedure.
        estimator = _plugin_estimator(args.method, fit)
        cfg = inference.BootstrapConfig(
            b=args.boot_b, block_len=block_len, seed=args.seed
        )
        boot = inference.bootstrap_se(sample, estimator, cfg)
        record += [
            ("se_alpha", _fmt(boot.se[0])),
            ("se_beta", _fmt(boot.se[1])),
            ("se_gamma", _fmt(boot.se[2])),
            ("boot_b", args.boot_b),
            ("block_len", block_len),
            ("boot_converged", boot.n_converged),
        ]

    if args.gof and usable:
        gof = inference.gof_mckay(sample, fit.params, b=args.gof_b, seed=args.seed)
        record += [
            ("gof_statistic", _fmt(gof.statistic)),
            ("gof_p", _fmt(gof.p_value)),
            ("gof_b", gof.b),
        ]

    _emit(record, args.out)
    print(
        f"fit: method={fit.method} alpha={fit.alpha:.6g} beta={fit.beta:.6g} "
        f"gamma={fit.gamma_rate:.6g} loglik={fit.loglik:.6g}",
        file=sys.stderr,
    )
    return 0


def _plugin_estimator(method: str, fit: estimators.EstimateResult):
    if method == "proposed1":
        return lambda s: estimators.estimate_proposed1(s, fit.r, fit.s)
    if method == "proposed2":
        return lambda s: estimators.estimate_proposed2(s, fit.r, fit.s)
    return {
        "ml": estimators.estimate_ml,
        "zhao": estimators.estimate_zhao,
        "nawa": estimators.estimate_nawa,
    }[method]


def cmd_mc(args) -> int:
    if args.preset == "paper":
        scenarios = montecarlo.paper_scenarios(m=args.reps)
    else:
        missing = [
            name
            for name in ("alpha", "beta", "gamma", "n")
            if getattr(args, name) is None
        ]
        if missing:
            raise DomainError(
                "mc needs --preset paper or all of --alpha --beta --gamma --n "
                f"(missing: {', '.join('--' + m for m in missing)})"
            )
        by_name = {m.name: m for m in montecarlo.default_methods()}
        methods = tuple(by_name[name] for name in dict.fromkeys(args.methods))
        params = McKayParams(args.alpha, args.beta, args.gamma)
        scenarios = (
            montecarlo.Scenario(
                params=params, n=args.n, m=args.reps, methods=methods
            ),
        )
    report = montecarlo.run_paper_suite(
        base_seed=args.seed, scenarios=scenarios, n_jobs=args.jobs
    )
    write_report(report, args.out)
    finite = [row for row in report.rows if np.isfinite(row.rmse)]
    print(
        f"mc: {len(report.rows)} rows ({len(finite)} with finite metrics)",
        file=sys.stderr,
    )
    if not finite:
        print("error: every benchmark cell failed", file=sys.stderr)
        return 3
    return 0


def cmd_density(args) -> int:
    params = McKayParams(args.alpha, args.beta, args.gamma)
    grid = density_grid(params, args.x_max, args.y_max, args.resolution)
    write_density_grid(grid, args.out)
    return 0


def cmd_rainfall(args) -> int:
    series = read_series(args.input) if args.input else load_rainfall_series()
    write_pairs(rainfall_pairs(series), args.out)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        return args.func(args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (EstimationError, NumericRangeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())

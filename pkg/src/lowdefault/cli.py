"""Command-line front end.

Subcommands:

* ``estimate``      -- run a one-period or multi-period estimation and print
                       an appendix-style text report or structured JSON.
* ``compare-dist``  -- tabulate binomial vs. correlated binomial pmfs with the
                       same size and success probability.
* ``datasets``      -- list the bundled default histories.

Reports never embed wall-clock time unless ``--stamp`` is given, so rerunning
with the same seed reproduces the output byte for byte.
"""

import argparse
import json
import sys
from datetime import datetime
from pathlib import Path

from .correlated import (
    CorrelatedObservation,
    conservative_bayes_correlated,
    neutral_bayes_correlated,
    ucb_correlated,
)
from .data_io import builtin_dataset, builtin_names, parse_csv
from .distributions import CorrBinomialParams, corr_binomial_mean_var, corr_binomial_pmf
from .errors import LowDefaultError
from .multi_period import (
    DEFAULT_LEVELS,
    CorrelationParams,
    DefaultTimeSeries,
    GridConfig,
    multi_run_report,
)
from .one_period import (
    ConfidenceLevel,
    PortfolioObservation,
    PriorConstraint,
    conservative_bayes_independent,
    naive_estimate,
    neutral_bayes_independent,
    ucb_independent,
)
from .report import EstimateReport, OnePeriodEstimates, render_structured, render_text

_MODES = ("one-period-independent", "one-period-correlated", "multi-period")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lowdefault",
        description="Long-run PD estimation for low default portfolios.")
    sub = parser.add_subparsers(dest="command", required=True)

    est = sub.add_parser("estimate", help="run PD estimators on a default history")
    est.add_argument("--mode", choices=_MODES, default="multi-period")
    data = est.add_mutually_exclusive_group()
    data.add_argument("--data", type=Path, help="CSV file (year,pool_size,defaults)")
    data.add_argument("--builtin", choices=builtin_names(), help="bundled dataset")
    est.add_argument("--n", type=int, help="pool size (one-period modes)")
    est.add_argument("--k", type=int, help="observed defaults (one-period modes)")
    est.add_argument("--pool", action="store_true",
                     help="pool a multi-year history into one period")
    est.add_argument("--rho", type=float, help="pre-defined asset correlation")
    est.add_argument("--theta", type=float, help="pre-defined time correlation")
    est.add_argument("--levels", default=",".join(str(g) for g in DEFAULT_LEVELS),
                     help="comma-separated confidence levels in (0,1)")
    est.add_argument("--constraint-u", type=float, default=None,
                     help="uniform-prior upper endpoint (default: 1.0 one-period, "
                          "0.1 multi-period proxy)")
    est.add_argument("--iterations", type=int, default=10_000,
                     help="MC iterations for ML and confidence bounds")
    est.add_argument("--bayes-iterations", type=int, default=1_000,
                     help="inner MC iterations for the Bayesian estimators")
    est.add_argument("--grid-steps", type=int, default=2_500,
                     help="outer grid steps of the Bayesian estimators")
    est.add_argument("--runs", type=int, default=16, help="independent MC runs")
    est.add_argument("--seed", type=int, default=36)
    est.add_argument("--workers", type=int, default=1,
                     help="thread workers across runs (output is identical "
                          "for any worker count)")
    est.add_argument("--format", choices=("text", "structured"), default="text")
    est.add_argument("--stamp", action="store_true",
                     help="include a wall-clock timestamp line")

    cmp_ = sub.add_parser("compare-dist",
                          help="binomial vs correlated binomial pmf table")
    cmp_.add_argument("--n", type=int, required=True)
    cmp_.add_argument("--pd", type=float, required=True, dest="pd")
    cmp_.add_argument("--rho", type=float, required=True)
    cmp_.add_argument("--format", choices=("text", "structured"), default="text")

    sub.add_parser("datasets", help="list bundled datasets")
    return parser


def _load_series(args) -> tuple[str, DefaultTimeSeries]:
    if args.builtin:
        record = builtin_dataset(args.builtin)
        return record.description, record.series
    if args.data:
        return args.data.name, parse_csv(args.data.read_text(encoding="utf-8"))
    if args.n is not None and args.k is not None:
        return (f"Single period, n={args.n}, k={args.k}",
                DefaultTimeSeries(rows=((1, args.n, args.k),)))
    raise LowDefaultError(
        "no input data: pass --builtin, --data, or --n/--k for one-period modes")


def _single_observation(args, series: DefaultTimeSeries) -> PortfolioObservation:
    if series.T == 1:
        _, n, k = series.rows[0]
        return PortfolioObservation(n, k)
    if not args.pool:
        raise LowDefaultError(
            f"one-period mode on a {series.T}-year history needs --pool to "
            "aggregate it into a single period")
    return PortfolioObservation(series.obligor_years, series.total_defaults)


def _one_period_report(args, dataset: str, series: DefaultTimeSeries,
                       levels) -> EstimateReport:
    obs = _single_observation(args, series)
    u = args.constraint_u if args.constraint_u is not None else 1.0
    constraint = PriorConstraint(u)
    if args.mode == "one-period-independent":
        rho = None
        ucbs = tuple(ucb_independent(obs, ConfidenceLevel(g)) for g in levels)
        neutral_c = neutral_bayes_independent(obs, constraint)
        neutral_u = neutral_bayes_independent(obs, PriorConstraint(1.0))
        conservative = conservative_bayes_independent(obs)
    else:
        if args.rho is None:
            raise LowDefaultError("one-period-correlated mode requires --rho")
        cobs = CorrelatedObservation(obs, args.rho)
        rho = args.rho
        ucbs = tuple(ucb_correlated(cobs, ConfidenceLevel(g)) for g in levels)
        neutral_c = neutral_bayes_correlated(cobs, constraint)
        neutral_u = neutral_bayes_correlated(cobs, PriorConstraint(1.0))
        conservative = conservative_bayes_correlated(cobs)
    return EstimateReport(
        title="One-period low default estimation",
        dataset=dataset,
        mode=args.mode,
        seed=args.seed,
        period_length=1,
        obligor_years=obs.n,
        total_defaults=obs.k,
        naive_pd=naive_estimate(obs),
        timestamp=_timestamp(args),
        one_period=OnePeriodEstimates(
            rho=rho,
            levels=tuple(levels),
            ucbs=ucbs,
            constraint_u=u,
            neutral_constrained=neutral_c,
            neutral_unconstrained=neutral_u,
            conservative=conservative,
        ),
    )


def _multi_period_report(args, dataset: str, series: DefaultTimeSeries,
                         levels) -> EstimateReport:
    u = args.constraint_u if args.constraint_u is not None else 0.1
    config = GridConfig(m=args.grid_steps, u=u, n_iter=args.bayes_iterations,
                        runs=args.runs, seed=args.seed)
    blocks = [multi_run_report(series, "estimated", config, levels=levels,
                               ml_iterations=args.iterations,
                               workers=args.workers)]
    if args.rho is not None or args.theta is not None:
        if args.rho is None or args.theta is None:
            raise LowDefaultError(
                "pre-defined correlations need both --rho and --theta")
        blocks.append(multi_run_report(
            series, "predefined", config,
            params=CorrelationParams(args.rho, args.theta),
            levels=levels, ml_iterations=args.iterations, workers=args.workers))
    return EstimateReport(
        title="Multiperiod low default estimation",
        dataset=dataset,
        mode=args.mode,
        seed=args.seed,
        period_length=series.T,
        obligor_years=series.obligor_years,
        total_defaults=series.total_defaults,
        naive_pd=series.naive_pd(),
        timestamp=_timestamp(args),
        ml_iterations=args.iterations,
        ucb_iterations=args.iterations,
        bayes_iterations=args.bayes_iterations,
        grid_steps=args.grid_steps,
        runs=args.runs,
        blocks=tuple(blocks),
    )


def _timestamp(args) -> str | None:
    if not args.stamp:
        return None
    return datetime.now().strftime("%a %b %d %H:%M:%S %Y")


def _cmd_estimate(args) -> int:
    levels = tuple(float(tok) for tok in args.levels.split(",") if tok.strip())
    dataset, series = _load_series(args)
    if args.mode == "multi-period":
        report = _multi_period_report(args, dataset, series, levels)
    else:
        report = _one_period_report(args, dataset, series, levels)
    if args.format == "structured":
        sys.stdout.write(render_structured(report))
    else:
        sys.stdout.write(render_text(report))
    return 0 if report.ok else 1


def _cmd_compare_dist(args) -> int:
    params = CorrBinomialParams(args.n, args.pd, args.rho)
    rows = []
    cum_b = cum_c = 0.0
    for k in range(args.n + 1):
        p_b = corr_binomial_pmf(CorrBinomialParams(args.n, args.pd, 0.0), k)
        p_c = corr_binomial_pmf(params, k)
        rows.append((k, p_b, p_c))
        cum_b += p_b
        cum_c += p_c
        if cum_b >= 1.0 - 1e-9 and cum_c >= 1.0 - 1e-9:
            break
    _, var_b = corr_binomial_mean_var(CorrBinomialParams(args.n, args.pd, 0.0))
    mean, var_c = corr_binomial_mean_var(params)
    if args.format == "structured":
        doc = {
            "n": args.n, "pd": args.pd, "rho": args.rho,
            "mean": mean, "binomial_variance": var_b,
            "correlated_variance": var_c,
            "rows": [{"k": k, "binomial": b, "correlated": c}
                     for k, b, c in rows],
        }
        sys.stdout.write(json.dumps(doc, indent=2) + "\n")
        return 0
    print(f"Default count distribution: n={args.n}, pd={args.pd}, rho={args.rho}")
    print(f"Mean: {mean:.6g}  variance (independent): {var_b:.6g}  "
          f"variance (correlated): {var_c:.6g}")
    print(f"{'k':>6}  {'binomial':>14}  {'correlated':>14}")
    for k, b, c in rows:
        print(f"{k:>6}  {b:>14.6e}  {c:>14.6e}")
    return 0


def _cmd_datasets(_args) -> int:
    for name in builtin_names():
        record = builtin_dataset(name)
        series = record.series
        d = series.total_defaults
        plural = "" if d == 1 else "s"
        print(f"{name} (T={series.T}, {series.obligor_years} obligor-years, "
              f"{d} default{plural})")
        print(f"    {record.description} -- {record.source}")
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "estimate":
            return _cmd_estimate(args)
        if args.command == "compare-dist":
            return _cmd_compare_dist(args)
        return _cmd_datasets(args)
    except (LowDefaultError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

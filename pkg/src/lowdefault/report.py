"""Report containers and text/structured rendering.

The text layout follows the classic multi-period low default estimation
printout: Monte-Carlo characteristics first, then data summary metrics, then
one block per correlation mode with ML estimates, the upper-confidence-bound
row and the three Bayesian estimates, each with the standard deviation of
its across-run mean. The structured form carries the same numbers at full
precision.
"""

import json
from dataclasses import dataclass, field

__all__ = [
    "EstimateStat",
    "ModeEstimates",
    "OnePeriodEstimates",
    "EstimateReport",
    "render_text",
    "to_dict",
    "render_structured",
]


@dataclass(frozen=True)
class EstimateStat:
    """Across-run mean of an estimator, the standard deviation of that mean,
    and the raw per-run values."""

    value: float
    sd: float
    per_run: tuple[float, ...]


@dataclass(frozen=True)
class ModeEstimates:
    """Replicated multi-period estimates for one correlation mode."""

    mode: str                      # "estimated" | "predefined"
    predefined: object             # CorrelationParams when mode == "predefined"
    ml_pd: EstimateStat | None
    ml_rho: EstimateStat | None    # estimated mode only
    ml_theta: EstimateStat | None
    levels: tuple[float, ...]
    ucbs: tuple[EstimateStat, ...] | None
    neutral: EstimateStat | None
    constrained: EstimateStat | None
    conservative: EstimateStat | None
    constraint_u: EstimateStat | None   # the 99% bound that constrains `constrained`
    naive_pd: float
    failures: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures


@dataclass(frozen=True)
class OnePeriodEstimates:
    """Deterministic one-period estimates (independent or correlated)."""

    rho: float | None              # None in the independent model
    levels: tuple[float, ...]
    ucbs: tuple[float, ...]
    constraint_u: float
    neutral_constrained: float
    neutral_unconstrained: float
    conservative: float


@dataclass(frozen=True)
class EstimateReport:
    """Full output document of an estimation command."""

    title: str
    dataset: str
    mode: str
    seed: object
    period_length: int
    obligor_years: int
    total_defaults: int
    naive_pd: float
    timestamp: str | None = None
    ml_iterations: int | None = None
    ucb_iterations: int | None = None
    bayes_iterations: int | None = None
    grid_steps: int | None = None
    runs: int | None = None
    blocks: tuple[ModeEstimates, ...] = ()
    one_period: OnePeriodEstimates | None = None

    @property
    def ok(self) -> bool:
        return all(block.ok for block in self.blocks)


def _bps(p: float) -> float:
    return 1e4 * p


def _fmt_bps(p: float) -> str:
    return f"{_bps(p):.1f}"


def _fmt_trim(x: float) -> str:
    s = f"{x:.1f}"
    return s[:-2] if s.endswith(".0") else s


def _fmt_pct(p: float) -> str:
    return f"{100.0 * p:.1f}"


def _level_label(gamma: float) -> str:
    return f"{100.0 * gamma:g}"


def _mode_lines(block: ModeEstimates) -> list[str]:
    lines = []
    if block.mode == "estimated":
        lines.append("Estimates with estimated correlations:")
    else:
        lines.append("Estimates with pre-defined correlations:")
        lines.append(f"Asset correlation (%): {_fmt_pct(block.predefined.rho)}")
        lines.append(f"Time correlation deployed (%): {_fmt_pct(block.predefined.theta)}")

    def stat_pair(label: str, stat: EstimateStat | None, unit: str, scale) -> None:
        if stat is None:
            lines.append(f"{label}: failed")
            return
        lines.append(f"{label}: {scale(stat.value)}")
        lines.append(f"Standard deviation ({unit}): {scale(stat.sd)}")

    if block.mode == "estimated":
        stat_pair("ML estimate for PD (bps)", block.ml_pd, "bps", _fmt_bps)
        stat_pair("ML estimate for rho (%)", block.ml_rho, "%", _fmt_pct)
        stat_pair("ML estimate for theta (%)", block.ml_theta, "%", _fmt_pct)
    else:
        stat_pair("ML estimate for PD (bps) only", block.ml_pd, "bps", _fmt_bps)

    lines.append("Conf. level (%)   & " + " & ".join(_level_label(g) for g in block.levels))
    if block.ucbs is not None:
        lines.append("Upper bound (bps) & "
                     + " & ".join(_fmt_bps(s.value) for s in block.ucbs))
        lines.append("Std. dev. (bps)   & "
                     + " & ".join(_fmt_bps(s.sd) for s in block.ucbs))
    else:
        lines.append("Upper bound (bps) & failed")

    stat_pair("Bayesian neutral estimate for PD (bps)", block.neutral, "bps", _fmt_bps)
    stat_pair("Bayesian constrained estimate for PD (bps)", block.constrained,
              "bps", _fmt_bps)
    stat_pair("Bayesian conservative estimate for PD (bps)", block.conservative,
              "bps", _fmt_bps)
    for name, msg in sorted(block.failures.items()):
        lines.append(f"FAILED [{name}]: {msg}")
    return lines


def render_text(report: EstimateReport) -> str:
    """Appendix-style plain text rendering."""
    lines: list[str] = []
    if report.timestamp is not None:
        lines.append(report.timestamp)
    lines.append(report.title)
    lines.append(report.dataset)
    lines.append("")
    lines.append(f"Random seed: {report.seed}")
    if report.blocks:
        lines.append(f"Number of ML simulation iterations: {report.ml_iterations}")
        lines.append(f"Number of ML simulation runs: {report.runs}")
        lines.append(f"Number of confidence bounds simulation iterations: "
                     f"{report.ucb_iterations}")
        lines.append(f"Number of confidence bounds simulation runs: {report.runs}")
        lines.append(f"Number of inner Bayesian simulation iterations: "
                     f"{report.bayes_iterations}")
        lines.append(f"Number of outer Bayesian steps: {report.grid_steps}")
        lines.append(f"Number of Bayesian simulation runs: {report.runs}")
    lines.append(f"Length of time period: {report.period_length}")
    lines.append(f"Total number of obligor-years: {report.obligor_years}")
    lines.append(f"Total observed number of defaults: {report.total_defaults}")
    lines.append(f"Naive PD estimate (bps): {_fmt_trim(_bps(report.naive_pd))}")

    for block in report.blocks:
        lines.append("")
        lines.extend(_mode_lines(block))

    if report.one_period is not None:
        op = report.one_period
        lines.append("")
        if op.rho is None:
            lines.append("One-period estimates (independent defaults):")
        else:
            lines.append("One-period estimates (correlated defaults):")
            lines.append(f"Asset correlation (%): {_fmt_pct(op.rho)}")
        lines.append("Conf. level (%)   & "
                     + " & ".join(_level_label(g) for g in op.levels))
        lines.append("Upper bound (bps) & "
                     + " & ".join(_fmt_bps(v) for v in op.ucbs))
        lines.append(f"Prior constraint u (%): {_fmt_pct(op.constraint_u)}")
        lines.append("Bayesian neutral estimate, constrained prior (bps): "
                     + _fmt_bps(op.neutral_constrained))
        lines.append("Bayesian neutral estimate, unconstrained prior (bps): "
                     + _fmt_bps(op.neutral_unconstrained))
        lines.append("Bayesian conservative estimate (bps): "
                     + _fmt_bps(op.conservative))
    lines.append("")
    return "\n".join(lines)


def _stat_dict(stat: EstimateStat | None) -> dict | None:
    if stat is None:
        return None
    return {"value": stat.value, "sd": stat.sd, "per_run": list(stat.per_run)}


def to_dict(report: EstimateReport) -> dict:
    """Structured (JSON-ready) form carrying full-precision values."""
    doc = {
        "title": report.title,
        "dataset": report.dataset,
        "mode": report.mode,
        "timestamp": report.timestamp,
        "seed": report.seed,
        "config": {
            "ml_iterations": report.ml_iterations,
            "ucb_iterations": report.ucb_iterations,
            "bayes_iterations": report.bayes_iterations,
            "grid_steps": report.grid_steps,
            "runs": report.runs,
        },
        "summary": {
            "period_length": report.period_length,
            "obligor_years": report.obligor_years,
            "total_defaults": report.total_defaults,
            "naive_pd": report.naive_pd,
            "naive_pd_bps": _bps(report.naive_pd),
        },
        "blocks": [],
        "one_period": None,
        "ok": report.ok,
    }
    for block in report.blocks:
        doc["blocks"].append({
            "mode": block.mode,
            "predefined": (None if block.predefined is None else
                           {"rho": block.predefined.rho,
                            "theta": block.predefined.theta}),
            "ml_pd": _stat_dict(block.ml_pd),
            "ml_rho": _stat_dict(block.ml_rho),
            "ml_theta": _stat_dict(block.ml_theta),
            "levels": list(block.levels),
            "ucbs": (None if block.ucbs is None
                     else [_stat_dict(s) for s in block.ucbs]),
            "neutral": _stat_dict(block.neutral),
            "constrained": _stat_dict(block.constrained),
            "conservative": _stat_dict(block.conservative),
            "constraint_u": _stat_dict(block.constraint_u),
            "naive_pd": block.naive_pd,
            "failures": dict(block.failures),
        })
    if report.one_period is not None:
        op = report.one_period
        doc["one_period"] = {
            "rho": op.rho,
            "levels": list(op.levels),
            "ucbs": list(op.ucbs),
            "constraint_u": op.constraint_u,
            "neutral_constrained": op.neutral_constrained,
            "neutral_unconstrained": op.neutral_unconstrained,
            "conservative": op.conservative,
        }
    return doc


def render_structured(report: EstimateReport) -> str:
    return json.dumps(to_dict(report), indent=2, sort_keys=False) + "\n"

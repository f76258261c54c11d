"""Multi-period PD estimation with a latent, autocorrelated systemic factor.

Annual default counts are conditionally binomial given a Gaussian factor
path whose correlation decays geometrically with the year gap.  The marginal
likelihood of a default history is a T-dimensional normal integral,
approximated throughout by Monte-Carlo averaging over factor paths with
common random numbers, so that every solved equation is a smooth
deterministic function of the parameters given the seed.

Estimators: maximum likelihood (all three parameters, or the PD alone with
correlations pre-defined), Poisson-approximated upper confidence bounds, and
posterior-mean grid estimators for the conservative and uniform priors.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq, minimize, minimize_scalar
from scipy.special import expit, logit, logsumexp, ndtri

from . import _kernels
from .errors import (
    DegenerateGridError,
    DomainError,
    RootBracketError,
    SampleMismatchError,
    ValidationError,
)
from .one_period import ConfidenceLevel
from .report import EstimateStat, ModeEstimates

__all__ = [
    "DefaultTimeSeries",
    "CorrelationParams",
    "SystemicFactorSample",
    "MLEResult",
    "GridConfig",
    "DEFAULT_LEVELS",
    "build_sigma",
    "sample_systemic_factors",
    "conditional_likelihood",
    "marginal_likelihood",
    "mle_fit",
    "mle_fit_lambda",
    "ucb_multi",
    "conservative_bayes_multi",
    "neutral_bayes_multi",
    "multi_run_report",
]

# Six levels are reported; these defaults are an inference (config-overridable),
# chosen so the bounds they produce line up with published outputs.
DEFAULT_LEVELS = (0.50, 0.75, 0.90, 0.95, 0.99, 0.999)


@dataclass(frozen=True)
class DefaultTimeSeries:
    """Ordered annual default history: (year, pool size, defaults) rows."""

    rows: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        if len(self.rows) < 1:
            raise ValidationError("a default history needs at least one row")
        for year, n_t, k_t in self.rows:
            if n_t < 1:
                raise ValidationError(f"year {year}: pool size must be >= 1, got {n_t}")
            if not 0 <= k_t < n_t:
                raise ValidationError(
                    f"year {year}: defaults must satisfy 0 <= k < pool size, "
                    f"got k={k_t}, n={n_t}")
        years = [r[0] for r in self.rows]
        for prev, cur in zip(years, years[1:]):
            if cur != prev + 1:
                raise ValidationError(
                    f"years must be consecutive, got {prev} followed by {cur}")

    @property
    def T(self) -> int:
        return len(self.rows)

    @property
    def years(self) -> tuple[int, ...]:
        return tuple(r[0] for r in self.rows)

    @property
    def pool_sizes(self) -> np.ndarray:
        return np.array([r[1] for r in self.rows], dtype=np.float64)

    @property
    def default_counts(self) -> np.ndarray:
        return np.array([r[2] for r in self.rows], dtype=np.float64)

    @property
    def obligor_years(self) -> int:
        return sum(r[1] for r in self.rows)

    @property
    def total_defaults(self) -> int:
        return sum(r[2] for r in self.rows)

    def naive_pd(self) -> float:
        return self.total_defaults / self.obligor_years


@dataclass(frozen=True)
class CorrelationParams:
    """Asset correlation (cross-sectional) and time correlation (factor AR decay)."""

    rho: float
    theta: float

    def __post_init__(self):
        if not 0.0 <= self.rho < 1.0:
            raise DomainError(f"asset correlation must lie in [0,1), got {self.rho}")
        if not 0.0 <= self.theta < 1.0:
            raise DomainError(f"time correlation must lie in [0,1), got {self.theta}")


@dataclass(frozen=True)
class SystemicFactorSample:
    """Monte-Carlo sample of factor paths: draws[i, t] is year t of path i."""

    draws: np.ndarray
    theta: float
    seed: object

    @property
    def n_iter(self) -> int:
        return self.draws.shape[0]

    @property
    def T(self) -> int:
        return self.draws.shape[1]


@dataclass(frozen=True)
class MLEResult:
    lambda_hat: float
    rho_hat: float
    theta_hat: float
    log_likelihood: float
    converged: bool


@dataclass(frozen=True)
class GridConfig:
    """Monte-Carlo / grid configuration.

    ``n_iter`` is the factor-sample size of the operation it is passed to,
    ``m`` the number of outer grid steps of the posterior-mean estimators,
    ``u`` the grid endpoint, ``runs`` the number of independent replications
    in :func:`multi_run_report`, and ``seed`` any value acceptable as
    ``numpy.random.SeedSequence`` entropy.
    """

    m: int = 2500
    u: float = 0.1
    n_iter: int = 1000
    runs: int = 16
    seed: object = 36

    def __post_init__(self):
        if self.m < 10:
            raise ValidationError(f"grid steps must be >= 10, got m={self.m}")
        if not 0.0 < self.u <= 1.0:
            raise ValidationError(f"grid endpoint must lie in (0,1], got {self.u}")
        if self.n_iter < 100:
            raise ValidationError(f"MC size must be >= 100, got {self.n_iter}")
        if self.runs < 1:
            raise ValidationError(f"run count must be >= 1, got {self.runs}")


def _rng(seed) -> np.random.Generator:
    # counter-based generator so derived seeds are cheap and independent
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))


def build_sigma(theta: float, T: int) -> np.ndarray:
    """Correlation matrix of the factor path: theta^|t - tau|."""
    if not 0.0 <= theta < 1.0:
        raise DomainError(f"time correlation must lie in [0,1), got {theta}")
    if T < 1:
        raise DomainError(f"period count must be >= 1, got {T}")
    idx = np.arange(T)
    return theta ** np.abs(idx[:, None] - idx[None, :])


def sample_systemic_factors(theta: float, T: int, n_iter: int,
                            seed) -> SystemicFactorSample:
    """Draw ``n_iter`` factor paths of length T, deterministically in ``seed``."""
    chol = np.linalg.cholesky(build_sigma(theta, T))
    z = _rng(seed).standard_normal((n_iter, T))
    return SystemicFactorSample(draws=z @ chol.T, theta=theta, seed=seed)


def _lchoose_total(data: DefaultTimeSeries) -> float:
    n, k = data.pool_sizes, data.default_counts
    return float(np.sum(
        [math.lgamma(nt + 1) - math.lgamma(kt + 1) - math.lgamma(nt - kt + 1)
         for nt, kt in zip(n, k)]))


def conditional_likelihood(lam: float, rho: float, factors,
                           data: DefaultTimeSeries) -> float:
    """Probability of the observed history given one factor path.

    Defaults are independent across borrowers and years once the path is
    fixed, so this is a product of binomial probabilities with the
    conditional PD of each year.
    """
    if not 0.0 < lam < 1.0:
        raise DomainError(f"default probability must lie in (0,1), got {lam}")
    if not 0.0 <= rho < 1.0:
        raise DomainError(f"asset correlation must lie in [0,1), got {rho}")
    factors = np.atleast_2d(np.asarray(factors, dtype=np.float64))
    if factors.shape[1] != data.T:
        raise SampleMismatchError(
            f"factor path has {factors.shape[1]} periods, data has {data.T}")
    ll = _kernels.conditional_loglik(factors, data.pool_sizes,
                                     data.default_counts, float(ndtri(lam)), rho)
    return float(np.exp(ll[0] + _lchoose_total(data)))


def _log_marginal(lam: float, rho: float, draws: np.ndarray,
                  data: DefaultTimeSeries) -> float:
    # log of the equal-weight MC average of conditional likelihoods,
    # binomial coefficients included
    ll = _kernels.conditional_loglik(draws, data.pool_sizes, data.default_counts,
                                     float(ndtri(lam)), rho)
    return float(logsumexp(ll)) - math.log(len(ll)) + _lchoose_total(data)


def marginal_likelihood(lam: float, params: CorrelationParams,
                        data: DefaultTimeSeries,
                        sample: SystemicFactorSample) -> float:
    """Monte-Carlo estimate of the unconditional probability of the history."""
    if not 0.0 < lam < 1.0:
        raise DomainError(f"default probability must lie in (0,1), got {lam}")
    if sample.T != data.T:
        raise SampleMismatchError(
            f"factor sample has {sample.T} periods, data has {data.T}")
    if sample.theta != params.theta:
        raise SampleMismatchError(
            f"factor sample was drawn with theta={sample.theta}, "
            f"parameters say theta={params.theta}")
    return math.exp(_log_marginal(lam, params.rho, sample.draws, data))


_MLE_STARTS = ((1.0, 0.01, 0.05), (1.0, 0.12, 0.30), (3.0, 0.24, 0.60))


def mle_fit(data: DefaultTimeSeries, sample_config: GridConfig) -> MLEResult:
    """Maximum likelihood fit of (pd, rho, theta) by derivative-free search.

    The standard-normal innovations are drawn once per call and reused for
    every candidate parameter (common random numbers); only the Cholesky
    factor of the path correlation is recomputed when theta moves.  The
    search runs Nelder-Mead in logit coordinates from three starting points
    and keeps the best; with no observed defaults the fit degenerates to
    pd = 0 and the correlations are unidentifiable (reported as 0).
    """
    if data.total_defaults == 0:
        return MLEResult(0.0, 0.0, 0.0, 0.0, True)
    z = _rng(sample_config.seed).standard_normal((sample_config.n_iter, data.T))

    def neg_loglik(x) -> float:
        lam, rho, theta = expit(x)
        draws = z @ np.linalg.cholesky(build_sigma(theta, data.T)).T
        return -_log_marginal(lam, rho, draws, data)

    lam0 = min(max(data.naive_pd(), 1e-7), 0.5)
    best = None
    for lam_mult, rho0, theta0 in _MLE_STARTS:
        x0 = logit([min(lam_mult * lam0, 0.9), rho0, theta0])
        res = minimize(neg_loglik, x0, method="Nelder-Mead",
                       options={"xatol": 1e-4, "fatol": 1e-8, "maxfev": 4000})
        if best is None or res.fun < best.fun:
            best = res
    lam, rho, theta = expit(best.x)
    return MLEResult(float(lam), float(rho), float(theta),
                     -float(best.fun), bool(best.success))


def mle_fit_lambda(data: DefaultTimeSeries, params: CorrelationParams,
                   sample_config: GridConfig) -> MLEResult:
    """Maximum likelihood fit of the PD alone, correlations pre-defined."""
    if data.total_defaults == 0:
        return MLEResult(0.0, params.rho, params.theta, 0.0, True)
    draws = sample_systemic_factors(params.theta, data.T, sample_config.n_iter,
                                    sample_config.seed).draws

    def neg_loglik(log_lam: float) -> float:
        return -_log_marginal(math.exp(log_lam), params.rho, draws, data)

    res = minimize_scalar(neg_loglik, bounds=(math.log(1e-10), math.log(0.999)),
                          method="bounded", options={"xatol": 1e-10})
    return MLEResult(float(math.exp(res.x)), params.rho, params.theta,
                     -float(res.fun), bool(res.success))


def _ucb_on_draws(data: DefaultTimeSeries, rho: float, gamma: float,
                  draws: np.ndarray) -> float:
    """Solve the Poisson-approximated bound equation on a fixed factor sample.

    The total default count given a path is approximately Poisson with
    intensity sum_t n_t * G(pd, rho, s_t); averaging its CDF over paths and
    equating to 1 - gamma gives the bound.  On fixed draws the averaged CDF
    is strictly decreasing in the PD, so bisection with interpolation
    (Brent) applies.
    """
    n_arr = data.pool_sizes
    k_total = data.total_defaults
    target = 1.0 - gamma

    def f(lam: float) -> float:
        return _kernels.poisson_tail_mean(draws, n_arr, float(ndtri(lam)),
                                          rho, k_total) - target

    lo = 1e-12
    if f(lo) <= 0.0:
        raise RootBracketError(
            f"Poisson bound equation has no root above pd={lo}")
    hi = 0.5
    while f(hi) > 0.0:
        hi = 1.0 - (1.0 - hi) / 10.0
        if hi > 1.0 - 1e-12:
            raise RootBracketError(
                "Poisson bound equation not bracketed below pd=1")
    return float(brentq(f, lo, hi, xtol=1e-14, rtol=8.9e-16, maxiter=200))


def ucb_multi(data: DefaultTimeSeries, params: CorrelationParams,
              level: ConfidenceLevel, sample_config: GridConfig) -> float:
    """Upper confidence bound for the long-run PD at level gamma."""
    draws = sample_systemic_factors(params.theta, data.T, sample_config.n_iter,
                                    sample_config.seed).draws
    return _ucb_on_draws(data, params.rho, level.gamma, draws)


def _grid_log_sums(data: DefaultTimeSeries, rho: float, u_grid: np.ndarray,
                   draws: np.ndarray) -> np.ndarray:
    """log( sum over paths of the conditional likelihood ) at each grid PD.

    Endpoint PDs 0 and 1 are taken as limits: zero likelihood unless the
    history is default-free (PD 0) or impossible (PD 1, since k_t < n_t).
    """
    out = np.full(len(u_grid), -np.inf)
    interior = (u_grid > 0.0) & (u_grid < 1.0)
    if interior.any():
        thrs = ndtri(u_grid[interior])
        out[interior] = _kernels.grid_loglik(draws, data.pool_sizes,
                                             data.default_counts, thrs, rho)
    if data.total_defaults == 0:
        out[u_grid == 0.0] = math.log(draws.shape[0])
    return out


def _grid_weights(data: DefaultTimeSeries, rho: float, m: int, u: float,
                  last_index: int, draws: np.ndarray):
    u_grid = (np.arange(last_index + 1) / m) * u
    log_sums = _grid_log_sums(data, rho, u_grid, draws)
    shift = log_sums.max()
    if shift == -np.inf:
        raise DegenerateGridError(
            "posterior grid carries no likelihood mass; grid endpoint too "
            "small or data inconsistent")
    return u_grid, np.exp(log_sums - shift)


def _conservative_on_draws(data: DefaultTimeSeries, rho: float, m: int,
                           u: float, draws: np.ndarray) -> float:
    u_grid, w = _grid_weights(data, rho, m, u, m - 1, draws)
    num = float(np.sum(u_grid / (1.0 - u_grid) * w))
    den = float(np.sum(1.0 / (1.0 - u_grid) * w))
    return num / den


def _neutral_on_draws(data: DefaultTimeSeries, rho: float, m: int, u: float,
                      draws: np.ndarray) -> float:
    u_grid, w = _grid_weights(data, rho, m, u, m, draws)
    return float(np.sum(u_grid * w) / np.sum(w))


def conservative_bayes_multi(data: DefaultTimeSeries, params: CorrelationParams,
                             grid: GridConfig) -> float:
    """Posterior-mean PD under the conservative prior, by the grid estimator.

    Ratio of grid sums over u_i = (i/m) u, i = 0..m-1, with numerator weight
    u_i/(1-u_i) and denominator weight 1/(1-u_i), each multiplied by the MC
    sum of conditional likelihoods on one shared factor sample.
    """
    draws = sample_systemic_factors(params.theta, data.T, grid.n_iter,
                                    grid.seed).draws
    return _conservative_on_draws(data, params.rho, grid.m, grid.u, draws)


def neutral_bayes_multi(data: DefaultTimeSeries, params: CorrelationParams,
                        grid: GridConfig) -> float:
    """Posterior-mean PD under the uniform prior on (0, u), by the grid
    estimator over u_i = (i/m) u, i = 0..m."""
    draws = sample_systemic_factors(params.theta, data.T, grid.n_iter,
                                    grid.seed).draws
    return _neutral_on_draws(data, params.rho, grid.m, grid.u, draws)


_ESTIMATOR_NAMES = ("ml", "ucb", "neutral", "constrained", "conservative")


def _run_once(data: DefaultTimeSeries, mode: str, config: GridConfig,
              params: CorrelationParams | None, levels, ml_iterations: int,
              run_idx: int) -> dict:
    """One independent replication; every stage gets its own derived seed."""
    base = config.seed if isinstance(config.seed, tuple) else (config.seed,)

    def stage_seed(stage: int) -> tuple:
        return base + (run_idx, stage)

    out: dict = {"failures": {}}
    try:
        if mode == "estimated":
            fit = mle_fit(data, GridConfig(m=config.m, u=config.u,
                                           n_iter=ml_iterations, runs=1,
                                           seed=stage_seed(0)))
            run_params = CorrelationParams(fit.rho_hat, fit.theta_hat)
        else:
            fit = mle_fit_lambda(data, params,
                                 GridConfig(m=config.m, u=config.u,
                                            n_iter=ml_iterations, runs=1,
                                            seed=stage_seed(0)))
            run_params = params
        out["ml"] = fit
    except Exception as exc:  # noqa: BLE001 - reported, not swallowed
        out["failures"]["ml"] = str(exc)
        for name in _ESTIMATOR_NAMES[1:]:
            out["failures"][name] = "blocked by ML failure"
        return out

    try:
        ucb_draws = sample_systemic_factors(run_params.theta, data.T,
                                            ml_iterations, stage_seed(1)).draws
        out["ucb"] = [
            _ucb_on_draws(data, run_params.rho, g, ucb_draws) for g in levels
        ]
    except Exception as exc:  # noqa: BLE001
        out["failures"]["ucb"] = str(exc)

    try:
        u99 = ucb_multi(data, run_params, ConfidenceLevel(0.99),
                        GridConfig(m=config.m, u=config.u, n_iter=ml_iterations,
                                   runs=1, seed=stage_seed(3)))
        out["u99"] = u99
    except Exception as exc:  # noqa: BLE001
        out["failures"]["constrained"] = f"99% bound for the constraint failed: {exc}"
        u99 = None

    try:
        bayes_draws = sample_systemic_factors(run_params.theta, data.T,
                                              config.n_iter, stage_seed(2)).draws
        out["neutral"] = _neutral_on_draws(data, run_params.rho, config.m,
                                           config.u, bayes_draws)
        out["conservative"] = _conservative_on_draws(data, run_params.rho,
                                                     config.m, config.u,
                                                     bayes_draws)
        if u99 is not None:
            out["constrained"] = _neutral_on_draws(data, run_params.rho,
                                                   config.m, u99, bayes_draws)
    except Exception as exc:  # noqa: BLE001
        for name in ("neutral", "conservative", "constrained"):
            out["failures"].setdefault(name, str(exc))
    return out


def _stat(values) -> EstimateStat:
    values = tuple(float(v) for v in values)
    mean = float(np.mean(values))
    if len(values) > 1:
        sd = float(np.std(values, ddof=1) / math.sqrt(len(values)))
    else:
        sd = 0.0
    return EstimateStat(value=mean, sd=sd, per_run=values)


def multi_run_report(data: DefaultTimeSeries, mode: str, config: GridConfig,
                     params: CorrelationParams | None = None,
                     levels=DEFAULT_LEVELS, ml_iterations: int = 10_000,
                     workers: int = 1) -> ModeEstimates:
    """Replicated estimates with Monte-Carlo uncertainty for one mode.

    Runs ``config.runs`` independent replications (optionally on a thread
    pool; results are aggregated in run order, so the output is identical
    under serial and parallel execution) and reports, per estimator, the
    mean across runs and the standard deviation of that mean.
    """
    if mode not in ("estimated", "predefined"):
        raise ValidationError(f"mode must be 'estimated' or 'predefined', got {mode!r}")
    if mode == "predefined" and params is None:
        raise ValidationError("predefined mode requires correlation parameters")
    levels = tuple(float(g) for g in levels)
    for g in levels:
        ConfidenceLevel(g)

    run_ids = range(config.runs)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(
                lambda r: _run_once(data, mode, config, params, levels,
                                    ml_iterations, r), run_ids))
    else:
        results = [_run_once(data, mode, config, params, levels, ml_iterations, r)
                   for r in run_ids]

    failures: dict[str, str] = {}
    for r, res in zip(run_ids, results):
        for name, msg in res["failures"].items():
            failures.setdefault(name, f"run {r}: {msg}")

    def collect(name):
        vals = [res[name] for res in results if name in res]
        return vals if len(vals) == config.runs else None

    ml_fits = collect("ml")
    ucb_rows = collect("ucb")
    return ModeEstimates(
        mode=mode,
        predefined=params,
        ml_pd=_stat([f.lambda_hat for f in ml_fits]) if ml_fits else None,
        ml_rho=(_stat([f.rho_hat for f in ml_fits])
                if ml_fits and mode == "estimated" else None),
        ml_theta=(_stat([f.theta_hat for f in ml_fits])
                  if ml_fits and mode == "estimated" else None),
        levels=levels,
        ucbs=(tuple(_stat([row[i] for row in ucb_rows])
                    for i in range(len(levels))) if ucb_rows else None),
        neutral=_stat(vals) if (vals := collect("neutral")) else None,
        constrained=_stat(vals) if (vals := collect("constrained")) else None,
        conservative=_stat(vals) if (vals := collect("conservative")) else None,
        constraint_u=_stat(vals) if (vals := collect("u99")) else None,
        naive_pd=data.naive_pd(),
        failures=failures,
    )

"""One-period PD estimators under independent defaults.

With ``k`` defaults observed among ``n`` independent borrowers the default
count is binomial, and everything reduces to Beta-distribution algebra:
upper confidence bounds are Beta quantiles, and the posterior means for the
conservative prior (density 1/(1-pd)) and for uniform priors on (0, u) have
closed or near-closed forms.
"""

from dataclasses import dataclass

import numpy as np

from .distributions import BetaParams, beta_cdf, beta_pdf, beta_quantile
from .errors import DomainError, ValidationError

__all__ = [
    "PortfolioObservation",
    "ConfidenceLevel",
    "PriorConstraint",
    "naive_estimate",
    "ucb_independent",
    "conservative_bayes_independent",
    "neutral_bayes_independent",
    "posterior_cdf_conservative",
    "posterior_density_uniform",
]


@dataclass(frozen=True)
class PortfolioObservation:
    """Pool size at period start and defaults observed by period end."""

    n: int
    k: int

    def __post_init__(self):
        if self.n < 1:
            raise ValidationError(f"pool size must be >= 1, got n={self.n}")
        if not 0 <= self.k < self.n:
            raise ValidationError(
                f"default count must satisfy 0 <= k < n, got k={self.k}, n={self.n}")


@dataclass(frozen=True)
class ConfidenceLevel:
    """One-sided confidence level gamma; the test size is alpha = 1 - gamma."""

    gamma: float

    def __post_init__(self):
        if not 0.0 < self.gamma < 1.0:
            raise DomainError(f"confidence level must lie in (0,1), got {self.gamma}")

    @property
    def alpha(self) -> float:
        return 1.0 - self.gamma


@dataclass(frozen=True)
class PriorConstraint:
    """Upper endpoint u of the uniform prior support (0, u)."""

    u: float

    def __post_init__(self):
        if not 0.0 < self.u <= 1.0:
            raise DomainError(f"prior constraint must lie in (0,1], got {self.u}")


def naive_estimate(obs: PortfolioObservation) -> float:
    """Observed default rate k/n."""
    return obs.k / obs.n


def ucb_independent(obs: PortfolioObservation, level: ConfidenceLevel) -> float:
    """Upper confidence bound for the PD at level gamma.

    The bound is the gamma-quantile of a Beta(k+1, n-k) distribution, which
    inverts the binomial test of "true PD >= candidate" at size 1 - gamma.
    """
    return beta_quantile(BetaParams(obs.k + 1, obs.n - obs.k), level.gamma)


def conservative_bayes_independent(obs: PortfolioObservation) -> float:
    """Posterior mean (k+1)/(n+1) under the conservative prior 1/(1-pd)."""
    return (obs.k + 1) / (obs.n + 1)


def neutral_bayes_independent(obs: PortfolioObservation,
                              constraint: PriorConstraint) -> float:
    """Posterior mean under the uniform prior on (0, u).

    (k+1) P[Beta(k+2, n-k+1) <= u] / ((n+2) P[Beta(k+1, n-k+1) <= u]);
    at u = 1 this is (k+1)/(n+2). Nondecreasing in u.
    """
    n, k, u = obs.n, obs.k, constraint.u
    if u == 1.0:
        return (k + 1) / (n + 2)
    num = beta_cdf(BetaParams(k + 2, n - k + 1), u)
    den = beta_cdf(BetaParams(k + 1, n - k + 1), u)
    if den < 1e-270 or num == 0.0:
        return _truncated_posterior_mean(n, k, u)
    return (k + 1) * num / ((n + 2) * den)


def _truncated_posterior_mean(n: int, k: int, u: float) -> float:
    # log-space quadrature fallback for constraints far below the posterior
    # bulk, where both Beta cdf values underflow
    t, w = np.polynomial.legendre.leggauss(400)
    lam = 0.5 * u * (t + 1.0)
    log_f = np.log(w) + k * np.log(lam) + (n - k) * np.log1p(-lam)
    weights = np.exp(log_f - log_f.max())
    return float(np.sum(lam * weights) / np.sum(weights))


def posterior_cdf_conservative(obs: PortfolioObservation, lam: float) -> float:
    """Posterior distribution function of the PD under the conservative prior.

    A Beta(k+1, n-k) distribution function; evaluating it at the level-gamma
    upper confidence bound returns gamma.
    """
    if not 0.0 <= lam <= 1.0:
        raise DomainError(f"PD argument must lie in [0,1], got {lam}")
    return beta_cdf(BetaParams(obs.k + 1, obs.n - obs.k), lam)


def posterior_density_uniform(obs: PortfolioObservation,
                              constraint: PriorConstraint, lam: float) -> float:
    """Posterior density of the PD under the uniform prior on (0, u).

    A Beta(k+1, n-k+1) density truncated to (0, u) and renormalized;
    zero at and beyond u.
    """
    if lam >= constraint.u:
        return 0.0
    params = BetaParams(obs.k + 1, obs.n - obs.k + 1)
    mass = beta_cdf(params, constraint.u)
    return beta_pdf(params, lam) / mass

"""One-period PD estimators under one-factor correlated defaults.

The default count follows the correlated binomial law, so nothing is closed
form any more: upper confidence bounds come from root finding on the mixture
CDF, and the Bayesian posterior means are ratios of outer integrals (over the
PD) of the mixture pmf (Gauss-Hermite over the systemic factor inside,
adaptive quadrature outside).
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq
from scipy.special import log_ndtr, logsumexp, ndtri

from . import _kernels
from .distributions import CorrBinomialParams, _hermite_rule, corr_binomial_cdf
from .errors import RootBracketError, ValidationError
from .one_period import ConfidenceLevel, PortfolioObservation, PriorConstraint

__all__ = [
    "CorrelatedObservation",
    "ucb_correlated",
    "conservative_bayes_correlated",
    "neutral_bayes_correlated",
]

# fixed inner rule for the outer PD integrals; a constant node count keeps
# the outer integrand smooth, which adaptive quadrature needs
_INNER_NODES = 800

# outer quadrature targets; the posterior-mean ratios inherit roughly the sum
_OUTER_EPSABS = 1e-14
_OUTER_EPSREL = 1e-9
_OUTER_LIMIT = 300


@dataclass(frozen=True)
class CorrelatedObservation:
    """A one-period observation together with the asset correlation."""

    obs: PortfolioObservation
    rho: float

    def __post_init__(self):
        if self.obs.n <= 1:
            raise ValidationError(
                f"correlated model needs n > 1 borrowers, got n={self.obs.n}")
        if not 0.0 <= self.rho < 1.0:
            raise ValidationError(
                f"asset correlation must lie in [0,1), got {self.rho}")


def _pmf_at_thr(thr: float, rho: float, n: int, k: int) -> float:
    """Mixture pmf P[X = k] with the PD given as its normal threshold."""
    y, w = _hermite_rule(_INNER_NODES)
    return float(w @ _kernels.binom_pmf_given_factor(y, thr, rho, n, k))


def _cdf_for_root(lam: float, rho: float, n: int, k: int) -> float:
    return corr_binomial_cdf(CorrBinomialParams(n, lam, rho), k)


def ucb_correlated(cobs: CorrelatedObservation, level: ConfidenceLevel) -> float:
    """Upper confidence bound at level gamma under correlated defaults.

    Solves P[X <= k] = 1 - gamma for the PD by a bracketing root search on
    (0, 1); the CDF is strictly decreasing in the PD so the bracket is
    guaranteed for valid inputs.
    """
    n, k, rho = cobs.obs.n, cobs.obs.k, cobs.rho
    target = level.alpha
    lo, hi = 1e-10, 1.0 - 1e-10
    f_lo = _cdf_for_root(lo, rho, n, k) - target
    f_hi = _cdf_for_root(hi, rho, n, k) - target
    if f_lo <= 0.0 or f_hi >= 0.0:
        raise RootBracketError(
            f"confidence-bound equation not bracketed on (0,1): "
            f"f({lo})={f_lo:.3e}, f({hi})={f_hi:.3e}")
    return float(brentq(lambda lam: _cdf_for_root(lam, rho, n, k) - target,
                        lo, hi, xtol=1e-12, rtol=8.9e-16, maxiter=200))


def _lambda_breakpoints(n: int, k: int, upper: float) -> list[float]:
    scale = (k + 1) / n
    pts = sorted({scale * f for f in (0.1, 1.0, 10.0, 100.0)} | {0.5 * upper})
    return [p for p in pts if 0.0 < p < upper]


def _thr_from_decay(v: float) -> float:
    # PD parameterized as 1 - exp(-v); evaluate the normal threshold from
    # whichever of the PD and its complement is representable
    if v < math.log(2.0):
        return float(ndtri(-math.expm1(-v)))
    return float(-ndtri(math.exp(-v)))


def conservative_bayes_correlated(cobs: CorrelatedObservation) -> float:
    """Posterior mean of the PD under the conservative prior 1/(1-pd).

    Both moments are integrals of pmf(pd)/(1-pd) over (0,1). Substituting
    pd = 1 - exp(-v) cancels the 1/(1-pd) factor and turns the endpoint
    into an exponentially decaying tail, which is integrated adaptively.
    """
    n, k, rho = cobs.obs.n, cobs.obs.k, cobs.rho

    def density(v: float) -> float:
        if v <= 0.0:
            return 0.0 if k > 0 else 1.0
        q = math.exp(-v)  # 1 - pd
        if q == 0.0:
            return 0.0
        return _pmf_at_thr(_thr_from_decay(v), rho, n, k)

    def weighted(v: float) -> float:
        return -math.expm1(-v) * density(v)

    lchoose = math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)
    v_max = 90.0 + lchoose
    v_pts = [-math.log1p(-p) for p in _lambda_breakpoints(n, k, 1.0)]
    num = quad(weighted, 0.0, v_max, points=v_pts, epsabs=_OUTER_EPSABS,
               epsrel=_OUTER_EPSREL, limit=_OUTER_LIMIT)[0]
    den = quad(density, 0.0, v_max, points=v_pts, epsabs=_OUTER_EPSABS,
               epsrel=_OUTER_EPSREL, limit=_OUTER_LIMIT)[0]
    return num / den


def neutral_bayes_correlated(cobs: CorrelatedObservation,
                             constraint: PriorConstraint) -> float:
    """Posterior mean of the PD under the uniform prior on (0, u).

    Ratio of the first to the zeroth moment of the mixture pmf over (0, u);
    nondecreasing in u.
    """
    n, k, rho = cobs.obs.n, cobs.obs.k, cobs.rho
    u = constraint.u

    def density(lam: float) -> float:
        if lam <= 0.0:
            return 0.0 if k > 0 else 1.0
        if lam >= 1.0:
            return 0.0
        return _pmf_at_thr(float(ndtri(lam)), rho, n, k)

    pts = _lambda_breakpoints(n, k, u)
    num = quad(lambda lam: lam * density(lam), 0.0, u, points=pts,
               epsabs=_OUTER_EPSABS, epsrel=_OUTER_EPSREL, limit=_OUTER_LIMIT)[0]
    den = quad(density, 0.0, u, points=pts,
               epsabs=_OUTER_EPSABS, epsrel=_OUTER_EPSREL, limit=_OUTER_LIMIT)[0]
    if den <= 0.0 or not math.isfinite(num / den):
        # the pmf underflows on all of (0, u) when u sits far below the
        # posterior bulk; redo the moments in log space
        return _neutral_log_fallback(n, k, rho, u)
    return num / den


def _log_pmf_at_thr(thr: float, rho: float, n: int, k: int) -> float:
    y, w = _hermite_rule(_INNER_NODES)
    z = (thr - math.sqrt(rho) * y) / math.sqrt(1.0 - rho)
    lc = math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)
    return float(logsumexp(np.log(w) + lc + k * log_ndtr(z)
                           + (n - k) * log_ndtr(-z)))


def _neutral_log_fallback(n: int, k: int, rho: float, u: float) -> float:
    t, w = np.polynomial.legendre.leggauss(400)
    lam = 0.5 * u * (t + 1.0)
    logs = np.array([_log_pmf_at_thr(float(ndtri(l)), rho, n, k)
                     for l in lam]) + np.log(w)
    weights = np.exp(logs - logs.max())
    return float(np.sum(lam * weights) / np.sum(weights))

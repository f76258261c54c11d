"""NumPy reference kernels for the hot inner loops.

Every function here has a compiled twin in ``_core.pyx`` with the same
signature and semantics; ``lowdefault._kernels`` picks one pair at import
time.  All probability work is done in log space through
``scipy.special.log_ndtr`` so that extreme default thresholds neither
underflow nor produce NaNs.

Conventions shared by both backends:

* ``s`` is an ``(n_draws, T)`` matrix of systemic-factor realisations.
* ``thr`` is the default threshold ``Phi^-1(pd)``; callers convert the PD
  to a threshold before entering a kernel.
* ``n_t`` (pool sizes) and ``k_t`` (default counts) are float64 vectors.
* Summation order is fixed, so results are reproducible bit for bit.
"""

import numpy as np
from scipy.special import gammaincc, gammaln, log_ndtr, logsumexp, ndtr

BACKEND_NAME = "numpy"


def _z(s, thr: float, rho: float):
    # distance to default conditional on the factor, in idiosyncratic units
    return (thr - np.sqrt(rho) * s) / np.sqrt(1.0 - rho)


def conditional_loglik(s, n_t, k_t, thr: float, rho: float):
    """Log-likelihood of observing ``k_t`` defaults out of ``n_t`` per period,
    conditional on each factor path (one value per draw).

    Binomial coefficients are omitted; they cancel in every ratio this feeds
    and are added back by callers that need true likelihoods.
    """
    z = _z(np.asarray(s, dtype=np.float64), thr, rho)
    ll = (n_t - k_t) * log_ndtr(-z)
    defaulted = k_t > 0  # zero-default years need only the survival side
    if defaulted.any():
        ll[:, defaulted] += k_t[defaulted] * log_ndtr(z[:, defaulted])
    return ll.sum(axis=1)


def grid_loglik(s, n_t, k_t, thrs, rho: float):
    """log( sum over draws of the conditional likelihood ) at each threshold.

    This is the inner sum of the posterior-mean grid estimators, returned in
    log space so the caller can normalise with a single max shift.
    """
    s = np.asarray(s, dtype=np.float64)
    out = np.empty(len(thrs))
    for i, thr in enumerate(thrs):
        out[i] = logsumexp(conditional_loglik(s, n_t, k_t, thr, rho))
    return out


def poisson_tail_mean(s, n_t, thr: float, rho: float, k_total: int) -> float:
    """Mean over draws of P[Poisson(I) <= k_total] with intensity
    I = sum_t n_t * G(pd, rho, s_t)."""
    z = _z(np.asarray(s, dtype=np.float64), thr, rho)
    intensity = (n_t * ndtr(z)).sum(axis=1)
    # regularized upper incomplete gamma Q(k+1, I) equals the Poisson cdf
    return float(gammaincc(k_total + 1, intensity).mean())


def binom_pmf_given_factor(y, thr: float, rho: float, n: int, k: int):
    """C(n,k) G^k (1-G)^(n-k) at each factor value ``y``."""
    y = np.asarray(y, dtype=np.float64)
    z = _z(y, thr, rho)
    lc = gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1)
    return np.exp(lc + k * log_ndtr(z) + (n - k) * log_ndtr(-z))


def binom_tail_given_factor(y, thr: float, rho: float, n: int, k: int):
    """sum_{i<=k} C(n,i) G^i (1-G)^(n-i) at each factor value ``y``."""
    y = np.asarray(y, dtype=np.float64)
    z = _z(y, thr, rho)
    log_g = log_ndtr(z)
    log_s = log_ndtr(-z)
    i = np.arange(k + 1, dtype=np.float64)
    lc = gammaln(n + 1) - gammaln(i + 1) - gammaln(n - i + 1)
    terms = lc[:, None] + i[:, None] * log_g[None, :] + (n - i)[:, None] * log_s[None, :]
    return np.exp(logsumexp(terms, axis=0))


__all__ = [
    "BACKEND_NAME",
    "conditional_loglik",
    "grid_loglik",
    "poisson_tail_mean",
    "binom_pmf_given_factor",
    "binom_tail_given_factor",
]

# Compiled kernels for the hot inner loops. Mirrors _numpy.py: same function
# names, signatures and log-space semantics; see that module for the contract.

import numpy as np

from libc.math cimport erfc, exp, fmax, lgamma, log, log1p, sqrt

BACKEND_NAME = "compiled"

cdef double SQRT1_2 = 0.7071067811865476
cdef double LOG_SQRT_2PI = 0.9189385332046728
cdef double NEG_INF = float("-inf")


cdef inline double _ndtr(double z) noexcept nogil:
    return 0.5 * erfc(-z * SQRT1_2)


cdef inline double _log_ndtr(double z) noexcept nogil:
    # three regimes: complement near +inf, direct in the bulk, asymptotic
    # series in the far left tail where erfc itself underflows
    cdef double t, r
    if z > 6.0:
        return log1p(-0.5 * erfc(z * SQRT1_2))
    if z > -20.0:
        return log(0.5 * erfc(-z * SQRT1_2))
    t = 1.0 / (z * z)
    r = t * (-1.0 + t * (3.0 + t * (-15.0 + t * 105.0)))
    return -0.5 * z * z - log(-z) - LOG_SQRT_2PI + log1p(r)


cdef double _cond_loglik_one(const double[:] s_row, const double[:] n_t,
                             const double[:] k_t, double thr, double a,
                             double b) noexcept nogil:
    # a = sqrt(rho)/sqrt(1-rho), b = 1/sqrt(1-rho); z = b*thr - a*s
    cdef Py_ssize_t t
    cdef double z, acc = 0.0
    for t in range(s_row.shape[0]):
        z = b * thr - a * s_row[t]
        if k_t[t] > 0.0:  # zero-default years need only the survival side
            acc += k_t[t] * _log_ndtr(z)
        acc += (n_t[t] - k_t[t]) * _log_ndtr(-z)
    return acc


def conditional_loglik(s, n_t, k_t, double thr, double rho):
    cdef double[:, :] sv = np.ascontiguousarray(s, dtype=np.float64)
    cdef double[:] nv = np.ascontiguousarray(n_t, dtype=np.float64)
    cdef double[:] kv = np.ascontiguousarray(k_t, dtype=np.float64)
    out = np.empty(sv.shape[0])
    cdef double[:] ov = out
    cdef double a = sqrt(rho) / sqrt(1.0 - rho)
    cdef double b = 1.0 / sqrt(1.0 - rho)
    cdef Py_ssize_t j
    with nogil:
        for j in range(sv.shape[0]):
            ov[j] = _cond_loglik_one(sv[j], nv, kv, thr, a, b)
    return out


def grid_loglik(s, n_t, k_t, thrs, double rho):
    cdef double[:, :] sv = np.ascontiguousarray(s, dtype=np.float64)
    cdef double[:] nv = np.ascontiguousarray(n_t, dtype=np.float64)
    cdef double[:] kv = np.ascontiguousarray(k_t, dtype=np.float64)
    cdef double[:] tv = np.ascontiguousarray(thrs, dtype=np.float64)
    out = np.empty(tv.shape[0])
    scratch = np.empty(sv.shape[0])
    cdef double[:] ov = out
    cdef double[:] sc = scratch
    cdef double a = sqrt(rho) / sqrt(1.0 - rho)
    cdef double b = 1.0 / sqrt(1.0 - rho)
    cdef Py_ssize_t i, j
    cdef double hi, acc
    with nogil:
        for i in range(tv.shape[0]):
            hi = NEG_INF
            for j in range(sv.shape[0]):
                sc[j] = _cond_loglik_one(sv[j], nv, kv, tv[i], a, b)
                hi = fmax(hi, sc[j])
            if hi == NEG_INF:
                ov[i] = NEG_INF
                continue
            acc = 0.0
            for j in range(sv.shape[0]):
                acc += exp(sc[j] - hi)
            ov[i] = hi + log(acc)
    return out


cdef inline double _poisson_cdf(double intensity, long k) noexcept nogil:
    cdef double term, acc
    cdef long j
    if intensity <= 0.0:
        return 1.0
    term = exp(-intensity)
    acc = term
    for j in range(1, k + 1):
        term *= intensity / j
        acc += term
    if acc > 1.0:
        acc = 1.0
    return acc


def poisson_tail_mean(s, n_t, double thr, double rho, long k_total):
    cdef double[:, :] sv = np.ascontiguousarray(s, dtype=np.float64)
    cdef double[:] nv = np.ascontiguousarray(n_t, dtype=np.float64)
    cdef double a = sqrt(rho) / sqrt(1.0 - rho)
    cdef double b = 1.0 / sqrt(1.0 - rho)
    cdef double intensity, acc = 0.0
    cdef Py_ssize_t j, t
    with nogil:
        for j in range(sv.shape[0]):
            intensity = 0.0
            for t in range(sv.shape[1]):
                intensity += nv[t] * _ndtr(b * thr - a * sv[j, t])
            acc += _poisson_cdf(intensity, k_total)
    return acc / sv.shape[0]


def binom_pmf_given_factor(y, double thr, double rho, long n, long k):
    cdef double[:] yv = np.ascontiguousarray(y, dtype=np.float64)
    out = np.empty(yv.shape[0])
    cdef double[:] ov = out
    cdef double a = sqrt(rho) / sqrt(1.0 - rho)
    cdef double b = 1.0 / sqrt(1.0 - rho)
    cdef double lc = lgamma(n + 1.0) - lgamma(k + 1.0) - lgamma(n - k + 1.0)
    cdef double z
    cdef Py_ssize_t i
    with nogil:
        for i in range(yv.shape[0]):
            z = b * thr - a * yv[i]
            ov[i] = exp(lc + k * _log_ndtr(z) + (n - k) * _log_ndtr(-z))
    return out


def binom_tail_given_factor(y, double thr, double rho, long n, long k):
    cdef double[:] yv = np.ascontiguousarray(y, dtype=np.float64)
    out = np.empty(yv.shape[0])
    cdef double[:] ov = out
    cdef double a = sqrt(rho) / sqrt(1.0 - rho)
    cdef double b = 1.0 / sqrt(1.0 - rho)
    cdef double z, log_g, log_s, lt, hi, acc
    cdef Py_ssize_t i
    cdef long m
    with nogil:
        for i in range(yv.shape[0]):
            z = b * thr - a * yv[i]
            log_g = _log_ndtr(z)
            log_s = _log_ndtr(-z)
            # logsumexp over the m = 0..k binomial terms
            hi = NEG_INF
            for m in range(k + 1):
                lt = (lgamma(n + 1.0) - lgamma(m + 1.0) - lgamma(n - m + 1.0)
                      + m * log_g + (n - m) * log_s)
                hi = fmax(hi, lt)
            acc = 0.0
            for m in range(k + 1):
                lt = (lgamma(n + 1.0) - lgamma(m + 1.0) - lgamma(n - m + 1.0)
                      + m * log_g + (n - m) * log_s)
                acc += exp(lt - hi)
            ov[i] = exp(hi) * acc if hi != NEG_INF else 0.0
    return out

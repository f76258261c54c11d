"""Cross-backend agreement: the compiled kernels must match the NumPy
reference on shared inputs to floating-point noise."""

import numpy as np
import pytest
from scipy.special import gammaincc, ndtr, ndtri

from lowdefault._kernels import _numpy as knp

compiled = pytest.importorskip(
    "lowdefault._kernels._core", reason="compiled kernels not built")

BACKENDS = [knp, compiled]
IDS = ["numpy", "compiled"]


@pytest.fixture(scope="module")
def case():
    rng = np.random.default_rng(99)
    s = rng.standard_normal((400, 6))
    n_t = np.array([125.0, 250.0, 80.0, 500.0, 125.0, 60.0])
    k_t = np.array([0.0, 1.0, 0.0, 3.0, 0.0, 2.0])
    return s, n_t, k_t


@pytest.mark.parametrize("kern", BACKENDS, ids=IDS)
class TestEachBackend:
    def test_conditional_loglik_zero_rho_is_binomial(self, kern, case):
        s, n_t, k_t = case
        lam = 0.013
        ll = kern.conditional_loglik(s, n_t, k_t, float(ndtri(lam)), 0.0)
        expected = float(np.sum(k_t * np.log(lam) + (n_t - k_t) * np.log1p(-lam)))
        assert ll == pytest.approx(np.full(len(s), expected), rel=1e-12)

    def test_poisson_tail_against_gamma(self, kern, case):
        s, n_t, _ = case
        thr = float(ndtri(0.02))
        rho = 0.18
        z = (thr - np.sqrt(rho) * s) / np.sqrt(1 - rho)
        intensity = (n_t * ndtr(z)).sum(axis=1)
        expected = float(gammaincc(7 + 1, intensity).mean())
        assert kern.poisson_tail_mean(s, n_t, thr, rho, 7) == \
            pytest.approx(expected, rel=1e-12)

    def test_tail_sums_pmf_terms(self, kern):
        y = np.linspace(-5, 5, 31)
        thr, rho, n = float(ndtri(0.05)), 0.3, 50
        acc = np.zeros_like(y)
        for i in range(4):
            acc += kern.binom_pmf_given_factor(y, thr, rho, n, i)
        tail = kern.binom_tail_given_factor(y, thr, rho, n, 3)
        assert tail == pytest.approx(acc, rel=1e-10)


class TestBackendAgreement:
    def test_conditional_loglik(self, case):
        s, n_t, k_t = case
        for lam, rho in [(1e-6, 0.0), (0.001, 0.18), (0.3, 0.24), (0.97, 0.9)]:
            a = knp.conditional_loglik(s, n_t, k_t, float(ndtri(lam)), rho)
            b = compiled.conditional_loglik(s, n_t, k_t, float(ndtri(lam)), rho)
            np.testing.assert_allclose(a, b, rtol=1e-9, atol=1e-9)

    def test_grid_loglik(self, case):
        s, n_t, k_t = case
        thrs = ndtri(np.linspace(1e-5, 0.4, 64))
        a = knp.grid_loglik(s, n_t, k_t, thrs, 0.18)
        b = compiled.grid_loglik(s, n_t, k_t, thrs, 0.18)
        np.testing.assert_allclose(a, b, rtol=1e-9, atol=1e-9)

    def test_poisson_tail_mean(self, case):
        s, n_t, _ = case
        for lam, k in [(1e-4, 0), (0.003, 1), (0.05, 20), (0.4, 54)]:
            a = knp.poisson_tail_mean(s, n_t, float(ndtri(lam)), 0.24, k)
            b = compiled.poisson_tail_mean(s, n_t, float(ndtri(lam)), 0.24, k)
            assert a == pytest.approx(b, rel=1e-10, abs=1e-300)

    def test_factor_integrands(self):
        y = np.linspace(-9, 9, 201)
        for lam, rho, n, k in [(0.001, 0.18, 1000, 1), (0.2, 0.24, 3, 1),
                               (1e-8, 0.5, 200, 0), (0.9, 0.12, 40, 39)]:
            thr = float(ndtri(lam))
            np.testing.assert_allclose(
                knp.binom_pmf_given_factor(y, thr, rho, n, k),
                compiled.binom_pmf_given_factor(y, thr, rho, n, k),
                rtol=1e-9, atol=1e-280)
            np.testing.assert_allclose(
                knp.binom_tail_given_factor(y, thr, rho, n, k),
                compiled.binom_tail_given_factor(y, thr, rho, n, k),
                rtol=1e-9, atol=1e-280)

    def test_far_tail_log_phi(self):
        # exercises the asymptotic branch of the compiled log-CDF
        y = np.array([-45.0, -39.0, -25.0, 25.0, 39.0])
        thr = float(ndtri(1e-9))
        np.testing.assert_allclose(
            knp.binom_pmf_given_factor(y, thr, 0.8, 10, 2),
            compiled.binom_pmf_given_factor(y, thr, 0.8, 10, 2),
            rtol=1e-8, atol=0.0)

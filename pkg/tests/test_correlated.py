import numpy as np
import pytest

from lowdefault.correlated import (
    CorrelatedObservation,
    conservative_bayes_correlated,
    neutral_bayes_correlated,
    ucb_correlated,
)
from lowdefault.distributions import CorrBinomialParams, corr_binomial_cdf
from lowdefault.errors import ValidationError
from lowdefault.one_period import ConfidenceLevel, PortfolioObservation, PriorConstraint


def cobs(n, k, rho):
    return CorrelatedObservation(PortfolioObservation(n, k), rho)


class TestTypes:
    def test_needs_more_than_one_borrower(self):
        with pytest.raises(ValidationError):
            CorrelatedObservation(PortfolioObservation(1, 0), 0.1)

    def test_rho_range(self):
        with pytest.raises(ValidationError):
            cobs(10, 1, 1.0)
        with pytest.raises(ValidationError):
            cobs(10, 1, -0.1)


class TestUcbCorrelated:
    @pytest.mark.parametrize("n,rho,gamma,expected,tol", [
        (1000, 0.18, 0.50, 0.003789, 2e-5),
        (1000, 0.24, 0.90, 0.029129, 2e-4),
        (125, 0.18, 0.90, 0.083234, 2e-4),
        (2000, 0.24, 0.75, 0.008216, 5e-5),
    ])
    def test_published_points(self, n, rho, gamma, expected, tol):
        val = ucb_correlated(cobs(n, 1, rho), ConfidenceLevel(gamma))
        assert val == pytest.approx(expected, abs=tol)

    def test_zero_correlation_reduces_to_independent(self):
        from lowdefault.one_period import ucb_independent

        for n, k, gamma in [(1000, 1, 0.9), (125, 1, 0.5), (300, 2, 0.75)]:
            corr = ucb_correlated(cobs(n, k, 0.0), ConfidenceLevel(gamma))
            indep = ucb_independent(PortfolioObservation(n, k), ConfidenceLevel(gamma))
            assert corr == pytest.approx(indep, abs=1e-8)

    def test_increasing_in_level(self):
        c = cobs(500, 1, 0.18)
        vals = [ucb_correlated(c, ConfidenceLevel(g)) for g in (0.3, 0.5, 0.75, 0.9, 0.99)]
        assert all(b > a for a, b in zip(vals, vals[1:]))

    def test_root_residual(self):
        for n, k, rho, gamma in [(1000, 1, 0.18, 0.5), (125, 1, 0.24, 0.9),
                                 (250, 0, 0.12, 0.75)]:
            lam = ucb_correlated(cobs(n, k, rho), ConfidenceLevel(gamma))
            residual = corr_binomial_cdf(CorrBinomialParams(n, lam, rho), k) - (1 - gamma)
            assert abs(residual) <= 1e-8


class TestBayesCorrelated:
    @pytest.mark.parametrize("n,rho,expected,tol", [
        (1000, 0.18, 0.017455, 3e-4),
        (2000, 0.24, 0.020527, 3e-4),
        (125, 0.18, 0.056706, 3e-3),
    ])
    def test_conservative_published_points(self, n, rho, expected, tol):
        assert conservative_bayes_correlated(cobs(n, 1, rho)) == \
            pytest.approx(expected, abs=tol)

    @pytest.mark.parametrize("n,rho,u,expected,tol", [
        (1000, 0.18, 1.0, 0.017028, 3e-4),
        (125, 0.24, 0.01, 0.005909, 2e-4),
        (500, 0.24, 0.1, 0.028692, 2e-4),
        (250, 0.18, 0.25, 0.036091, 2e-4),
    ])
    def test_neutral_published_points(self, n, rho, u, expected, tol):
        val = neutral_bayes_correlated(cobs(n, 1, rho), PriorConstraint(u))
        assert val == pytest.approx(expected, abs=tol)

    def test_conservative_reduces_at_zero_correlation(self):
        # the numerical path must land on (k+1)/(n+1) without shortcuts
        for n, k in [(1000, 1), (80, 2)]:
            val = conservative_bayes_correlated(cobs(n, k, 0.0))
            assert val == pytest.approx((k + 1) / (n + 1), abs=1e-6)

    def test_neutral_reduces_at_zero_correlation(self):
        for n, k in [(1000, 1), (80, 2)]:
            val = neutral_bayes_correlated(cobs(n, k, 0.0), PriorConstraint(1.0))
            assert val == pytest.approx((k + 1) / (n + 2), abs=1e-6)

    def test_neutral_nondecreasing_in_u(self):
        c = cobs(125, 1, 0.24)
        vals = [neutral_bayes_correlated(c, PriorConstraint(u))
                for u in (0.005, 0.01, 0.05, 0.1, 0.25, 0.5, 1.0)]
        assert all(b >= a - 1e-12 for a, b in zip(vals, vals[1:]))

    def test_conservative_dominates_neutral(self):
        for n, k, rho in [(125, 1, 0.24), (1000, 1, 0.18), (250, 3, 0.12)]:
            c = cobs(n, k, rho)
            assert conservative_bayes_correlated(c) >= \
                neutral_bayes_correlated(c, PriorConstraint(1.0))

    def test_zero_defaults_supported(self):
        c = cobs(200, 0, 0.18)
        cons = conservative_bayes_correlated(c)
        neu = neutral_bayes_correlated(c, PriorConstraint(1.0))
        assert 0.0 < neu < cons < 0.2

    def test_constraint_far_below_posterior_bulk(self):
        # high default rate with a tiny prior endpoint: the pmf underflows
        # everywhere on (0, u) and the log-space fallback must take over
        val = neutral_bayes_correlated(cobs(538, 537, 0.18), PriorConstraint(0.25))
        assert 0.2 < val < 0.25


class TestMonotonicityInRho:
    def test_estimates_nondecreasing_in_rho(self):
        # sampled from the published grid {0, 0.18, 0.24}
        for n in (125, 1000):
            for build in (
                lambda c: ucb_correlated(c, ConfidenceLevel(0.9)),
                lambda c: neutral_bayes_correlated(c, PriorConstraint(1.0)),
                conservative_bayes_correlated,
            ):
                vals = [build(cobs(n, 1, rho)) for rho in (0.0, 0.18, 0.24)]
                assert all(b >= a - 1e-9 for a, b in zip(vals, vals[1:]))

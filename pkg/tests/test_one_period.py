import math

import numpy as np
import pytest
from scipy.integrate import quad

from lowdefault.distributions import binomial_cdf
from lowdefault.errors import DomainError, ValidationError
from lowdefault.one_period import (
    ConfidenceLevel,
    PortfolioObservation,
    PriorConstraint,
    conservative_bayes_independent,
    naive_estimate,
    neutral_bayes_independent,
    posterior_cdf_conservative,
    posterior_density_uniform,
    ucb_independent,
)


class TestTypes:
    def test_observation_invariants(self):
        with pytest.raises(ValidationError):
            PortfolioObservation(0, 0)
        with pytest.raises(ValidationError):
            PortfolioObservation(10, 10)
        with pytest.raises(ValidationError):
            PortfolioObservation(10, -1)

    def test_level_bounds(self):
        with pytest.raises(DomainError):
            ConfidenceLevel(0.0)
        with pytest.raises(DomainError):
            ConfidenceLevel(1.0)
        assert ConfidenceLevel(0.9).alpha == pytest.approx(0.1)

    def test_constraint_bounds(self):
        with pytest.raises(DomainError):
            PriorConstraint(0.0)
        with pytest.raises(DomainError):
            PriorConstraint(1.2)
        PriorConstraint(1.0)


class TestNaive:
    def test_values(self):
        assert naive_estimate(PortfolioObservation(1000, 1)) == pytest.approx(0.001)
        assert naive_estimate(PortfolioObservation(125, 1)) == pytest.approx(0.008)
        assert naive_estimate(PortfolioObservation(37, 0)) == 0.0


class TestUcb:
    # published one-period bounds for k = 1
    @pytest.mark.parametrize("n,gamma,expected_pct", [
        (1000, 0.50, 0.1678),
        (1000, 0.90, 0.3884),
        (125, 0.75, 2.1396),
        (125, 0.50, 1.3390),
        (2000, 0.90, 0.1943),
    ])
    def test_published_points(self, n, gamma, expected_pct):
        val = ucb_independent(PortfolioObservation(n, 1), ConfidenceLevel(gamma))
        assert 100 * val == pytest.approx(expected_pct, abs=5e-4)

    def test_increasing_in_level(self):
        obs = PortfolioObservation(500, 2)
        vals = [ucb_independent(obs, ConfidenceLevel(g))
                for g in np.linspace(0.05, 0.99, 20)]
        assert all(b > a for a, b in zip(vals, vals[1:]))

    def test_solves_tail_equation(self):
        # the bound is exactly where the lower-tail probability hits 1 - gamma
        for n, k, gamma in [(1000, 1, 0.9), (125, 1, 0.5), (600, 0, 0.75), (50, 3, 0.99)]:
            lam = ucb_independent(PortfolioObservation(n, k), ConfidenceLevel(gamma))
            assert binomial_cdf(n, lam, k) == pytest.approx(1 - gamma, abs=1e-9)


class TestBayesEstimators:
    def test_conservative_closed_form(self):
        assert conservative_bayes_independent(PortfolioObservation(1000, 1)) == \
            pytest.approx(2 / 1001)
        assert conservative_bayes_independent(PortfolioObservation(125, 1)) == \
            pytest.approx(0.015873, abs=5e-7)
        assert conservative_bayes_independent(PortfolioObservation(9, 0)) == \
            pytest.approx(0.1)

    def test_neutral_unconstrained(self):
        obs = PortfolioObservation(1000, 1)
        assert neutral_bayes_independent(obs, PriorConstraint(1.0)) == \
            pytest.approx(2 / 1002)

    @pytest.mark.parametrize("n,u,expected_pct", [
        (125, 0.025, 1.1785),
        (125, 0.1, 1.5746),
        (125, 0.05, 1.5233),
        (2000, 0.025, 0.0999),
    ])
    def test_neutral_published_points(self, n, u, expected_pct):
        val = neutral_bayes_independent(PortfolioObservation(n, 1), PriorConstraint(u))
        assert 100 * val == pytest.approx(expected_pct, abs=5e-5)

    def test_neutral_nondecreasing_in_u(self):
        obs = PortfolioObservation(80, 1)
        vals = [neutral_bayes_independent(obs, PriorConstraint(u))
                for u in np.linspace(0.005, 1.0, 40)]
        assert all(b >= a - 1e-14 for a, b in zip(vals, vals[1:]))


class TestPosterior:
    def test_upper_bound_duality(self):
        obs = PortfolioObservation(1000, 1)
        lam = ucb_independent(obs, ConfidenceLevel(0.5))
        assert posterior_cdf_conservative(obs, lam) == pytest.approx(0.5, abs=1e-3)

    def test_cdf_at_one(self):
        assert posterior_cdf_conservative(PortfolioObservation(10, 3), 1.0) == 1.0

    def test_exact_polynomial_point(self):
        # I_0.3(3, 8) for (n, k) = (10, 2), from exact integration of l^2 (1-l)^7
        assert posterior_cdf_conservative(PortfolioObservation(10, 2), 0.3) == \
            pytest.approx(0.6172172136, abs=1e-10)

    def test_density_unconstrained_is_beta(self):
        # u = 1 leaves the plain Beta(k+1, n-k+1) posterior density
        obs = PortfolioObservation(12, 2)
        val = posterior_density_uniform(obs, PriorConstraint(1.0), 0.2)
        a, b = 3, 11
        expected = (0.2 ** (a - 1) * 0.8 ** (b - 1)
                    * math.factorial(a + b - 1)
                    / (math.factorial(a - 1) * math.factorial(b - 1)))
        assert val == pytest.approx(expected, rel=1e-12)

    def test_density_zero_beyond_support(self):
        obs = PortfolioObservation(40, 1)
        assert posterior_density_uniform(obs, PriorConstraint(0.3), 0.3) == 0.0
        assert posterior_density_uniform(obs, PriorConstraint(0.3), 0.31) == 0.0

    def test_density_exact_truncation_point(self):
        # frozen exact rational: Beta(2,5) density at 0.2 over I_0.5(2,5)
        val = posterior_density_uniform(PortfolioObservation(5, 1),
                                        PriorConstraint(0.5), 0.2)
        assert val == pytest.approx(2.7594105263157895, rel=1e-12)

    def test_density_integrates_to_one(self):
        obs = PortfolioObservation(30, 2)
        c = PriorConstraint(0.4)
        val = quad(lambda lam: posterior_density_uniform(obs, c, lam), 0, 0.4,
                   points=[0.05, 0.1], limit=200)[0]
        assert val == pytest.approx(1.0, rel=1e-9)

"""Independent cross-check machinery: quadrature and Monte Carlo."""
from __future__ import annotations

import math

import pytest

import hrx
from hrx import (
    I_k_quadrature,
    QuadratureConvergenceError,
    QuadratureResult,
    mc_triangular_maxima,
    quad_semi_infinite,
)


class TestQuadSemiInfinite:
    def test_exponential_integral(self):
        r = quad_semi_infinite(lambda z: math.exp(-z), 0.0, 1e-12)
        assert abs(r.value - 1.0) <= 1e-12
        assert r.abs_error_estimate >= 0.0
        assert r.evaluations > 0

    def test_gamma_two(self):
        r = quad_semi_infinite(lambda z: z * math.exp(-z), 0.0, 1e-12)
        assert abs(r.value - 1.0) <= 1e-12

    def test_shifted_lower_limit(self):
        r = quad_semi_infinite(lambda z: math.exp(-z), 2.5, 1e-12)
        assert abs(r.value - math.exp(-2.5)) <= 1e-12

    def test_deterministic(self):
        f = lambda z: math.exp(-z) * math.cos(z)
        assert quad_semi_infinite(f, 0.0, 1e-10) == quad_semi_infinite(
            f, 0.0, 1e-10
        )

    def test_result_is_frozen(self):
        r = quad_semi_infinite(lambda z: math.exp(-z), 0.0, 1e-10)
        assert isinstance(r, QuadratureResult)
        with pytest.raises(AttributeError):
            r.value = 0.0

    @pytest.mark.parametrize("tol", [0.0, -1e-8, math.nan])
    def test_tolerance_domain(self, tol):
        with pytest.raises(ValueError):
            quad_semi_infinite(lambda z: math.exp(-z), 0.0, tol)

    def test_nonconvergence_raises_with_partial(self):
        # a non-decaying oscillation defeats the decay-based transform
        with pytest.raises(QuadratureConvergenceError) as info:
            quad_semi_infinite(lambda z: math.sin(200.0 * z), 0.0, 1e-10)
        partial = info.value.partial
        assert isinstance(partial, QuadratureResult)
        assert partial.abs_error_estimate > 1e-10


class TestIkQuadrature:
    def test_matches_simple_closed_form(self):
        # I_0(1; 0, 0) = 2 (1 - Phi(1))
        got = I_k_quadrature(0, 1.0, 0.0, 0.0)
        want = 2.0 * hrx.std_normal_survival(1.0)
        assert abs(got - want) <= 1e-10

    def test_vanishes_as_y_grows(self):
        for k in range(4):
            assert abs(I_k_quadrature(k, 1.0, 0.0, 60.0)) <= 1e-12

    @pytest.mark.parametrize("k", [-1, 4])
    def test_k_domain(self, k):
        with pytest.raises(ValueError):
            I_k_quadrature(k, 1.0, 0.0, 0.0)

    @pytest.mark.parametrize("lam", [0.0, -1.0, math.inf])
    def test_lambda_domain(self, lam):
        with pytest.raises(ValueError):
            I_k_quadrature(0, lam, 0.0, 0.0)


class TestMonteCarlo:
    def test_comonotone_within_three_se(self):
        est, se = mc_triangular_maxima(50, 1.0, 0.5, 1.0, 200_000, 7)
        ref = hrx.exact_joint_max_cdf(50, 1.0, 0.5, 1.0)
        assert abs(est - ref) <= 3.0 * se

    def test_independent_within_three_se(self):
        est, se = mc_triangular_maxima(50, 0.0, 0.5, 1.0, 200_000, 11)
        ref = hrx.exact_joint_max_cdf(50, 0.0, 0.5, 1.0)
        assert abs(est - ref) <= 3.0 * se

    def test_reproducible(self):
        a = mc_triangular_maxima(50, 0.5, 1.0, 1.0, 50_000, 123)
        b = mc_triangular_maxima(50, 0.5, 1.0, 1.0, 50_000, 123)
        assert a == b

    def test_seed_sensitivity(self):
        a, _ = mc_triangular_maxima(50, 0.5, 1.0, 1.0, 50_000, 123)
        b, _ = mc_triangular_maxima(50, 0.5, 1.0, 1.0, 50_000, 124)
        assert a != b

    def test_standard_error_formula(self):
        est, se = mc_triangular_maxima(50, 0.5, 1.0, 1.0, 50_000, 123)
        assert se == math.sqrt(est * (1.0 - est) / 50_000)

    def test_chunking_invisible(self):
        # trials above the internal chunk size follow the same stream
        est_a, _ = mc_triangular_maxima(10**5, 0.5, 1.0, 1.0, 25, 5)
        est_b, _ = mc_triangular_maxima(10**5, 0.5, 1.0, 1.0, 25, 5)
        assert est_a == est_b

    def test_unbiased_across_seeds(self):
        # the mean over many independent seeds must sit within four
        # pooled standard errors of the exact probability
        n, rho, x, y = 50, 0.5, 1.0, 1.0
        trials, seeds = 20_000, 60
        total_hits_rate = sum(
            mc_triangular_maxima(n, rho, x, y, trials, s)[0] for s in range(seeds)
        ) / seeds
        exact = hrx.exact_joint_max_cdf(n, rho, x, y)
        pooled_se = math.sqrt(exact * (1.0 - exact) / (seeds * trials))
        assert abs(total_hits_rate - exact) <= 4.0 * pooled_se

    def test_domain(self):
        with pytest.raises(ValueError):
            mc_triangular_maxima(2, 0.5, 0.0, 0.0, 100, 0)
        with pytest.raises(ValueError):
            mc_triangular_maxima(50, 0.5, 0.0, 0.0, 0, 0)
        with pytest.raises(ValueError):
            mc_triangular_maxima(50, 1.5, 0.0, 0.0, 100, 0)
        with pytest.raises(TypeError):
            mc_triangular_maxima(50, 0.5, 0.0, 0.0, 100.5, 0)

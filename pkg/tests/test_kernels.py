import math

import numpy as np
import pytest

from fracspec.kernels import (
    FracParams,
    c_n_alpha,
    gamma,
    kernel_K,
    kernel_K_integral,
    kernel_k,
    mu_theoretical,
    nu_exponent,
    telescoping_residual,
)

ALPHAS = [0.1, 0.25, 0.5, 0.75, 0.9]


class TestGamma:
    def test_integers(self):
        assert gamma(1.0) == 1.0
        assert gamma(4.0) == 6.0

    def test_half(self):
        # sqrt(pi), frozen from a 30-digit reference evaluation
        assert gamma(0.5) == pytest.approx(1.772453850905516, rel=1e-12)

    @pytest.mark.parametrize("x", [-1.0, 0.0, -0.5])
    def test_domain(self, x):
        with pytest.raises(ValueError):
            gamma(x)

    def test_recurrence(self):
        for x in np.linspace(0.05, 30.0, 173):
            lhs = gamma(x + 1.0)
            assert abs(lhs - x * gamma(x)) / lhs <= 1e-12


class TestFracParams:
    def test_valid(self):
        p = FracParams(alpha=0.5, n=2, epsilon=1e-3, lam=0.9)
        assert p.n == 2

    @pytest.mark.parametrize(
        "kw",
        [
            dict(alpha=0.0),
            dict(alpha=1.0),
            dict(alpha=0.5, n=0),
            dict(alpha=0.5, epsilon=0.0),
            dict(alpha=0.5, lam=0.4),
            dict(alpha=0.5, lam=1.5),
        ],
    )
    def test_invalid(self, kw):
        with pytest.raises(ValueError):
            FracParams(**kw)


class TestCnAlpha:
    def test_n1(self):
        for a in ALPHAS:
            assert c_n_alpha(1, a) == pytest.approx(1.0 / gamma(1.0 - a), rel=1e-14)

    def test_frozen(self):
        assert c_n_alpha(2, 0.5) == pytest.approx(1.1283791670955126, rel=1e-12)
        assert c_n_alpha(3, 0.5) == pytest.approx(1.5045055561273501, rel=1e-12)

    def test_domain(self):
        with pytest.raises(ValueError):
            c_n_alpha(0, 0.5)
        with pytest.raises(ValueError):
            c_n_alpha(2, 1.2)


class TestKernelK:
    def test_frozen_values(self):
        # (sin(api)/pi)(t^a - (t-1)_+^a)/t at (0.5, 0.5) and (2, 0.5)
        assert kernel_K(0.5, 0.5) == pytest.approx(0.45015815807855303, rel=1e-12)
        assert kernel_K(2.0, 0.5) == pytest.approx(0.065924135947381182, rel=1e-12)

    def test_zero_sentinel_and_negative(self):
        assert kernel_K(0.0, 0.5) == math.inf
        assert kernel_K(-2.0, 0.5) == 0.0

    def test_positive(self):
        rng = np.random.default_rng(7)
        for t in rng.uniform(1e-9, 60.0, 300):
            for a in ALPHAS:
                assert kernel_K(float(t), a) > 0.0

    def test_normalization(self):
        for a in ALPHAS:
            assert abs(kernel_K_integral(a, 100.0) - 1.0) <= 1e-6

    def test_minimal_cutoff_still_normalized(self):
        # the analytic tail makes the result cutoff-independent down to T = 2
        assert abs(kernel_K_integral(0.5, 2.0) - 1.0) <= 1e-8

    def test_cutoff_domain(self):
        with pytest.raises(ValueError):
            kernel_K_integral(0.5, 1.5)


class TestKernelk:
    def test_frozen_values(self):
        assert kernel_k(0.5, 0.5) == pytest.approx(0.79788456080286536, rel=1e-12)
        assert kernel_k(2.0, 0.5) == pytest.approx(-0.16524730314632361, rel=1e-12)

    def test_positive_below_one(self):
        for a in ALPHAS:
            assert kernel_k(0.25, a) > 0.0

    @pytest.mark.parametrize("t", [0.0, -1.0, 1.0])
    def test_domain(self, t):
        with pytest.raises(ValueError):
            kernel_k(t, 0.5)


class TestTelescoping:
    def test_empty_chain(self):
        assert telescoping_residual(2, 0.5) == 0.0

    def test_grid(self):
        for n in range(2, 13):
            for a in ALPHAS:
                assert telescoping_residual(n, a) <= 1e-12

    def test_domain(self):
        with pytest.raises(ValueError):
            telescoping_residual(1, 0.5)


class TestMu:
    def test_frozen(self):
        assert mu_theoretical(0.5, 2, 1.0) == pytest.approx(0.84628437532163443, rel=1e-12)
        assert mu_theoretical(0.5, 1, 1.0) == pytest.approx(0.56418958354775629, rel=1e-12)

    def test_zero_lipschitz_matches_monotone(self):
        a = mu_theoretical(0.3, 2, 2.0, lam=0.8, lip_m=0.0, inf_rho=0.5, monotone=False)
        b = mu_theoretical(0.3, 2, 2.0)
        assert a == pytest.approx(b, rel=1e-14)

    def test_monotone_in_diam_and_lip(self):
        ds = [0.5, 1.0, 2.0, 4.0]
        vals = [mu_theoretical(0.5, 2, d) for d in ds]
        assert all(b < a for a, b in zip(vals, vals[1:]))
        ms = [0.0, 0.5, 1.0]
        vals = [
            mu_theoretical(0.5, 2, 1.0, lam=0.9, lip_m=m, inf_rho=1.0, monotone=False)
            for m in ms
        ]
        assert all(b < a for a, b in zip(vals, vals[1:]))

    def test_lambda_below_alpha(self):
        with pytest.raises(ValueError):
            mu_theoretical(0.5, 2, 1.0, lam=0.4, lip_m=1.0, inf_rho=1.0, monotone=False)


class TestNu:
    def test_values(self):
        assert nu_exponent(2, 2, 3, 0.5, 0.0, 1) == pytest.approx(5.0 / 6.0, rel=1e-14)
        assert nu_exponent(1, 2, 4, 0.25, 0.0, 1) == pytest.approx(0.5, rel=1e-14)

    def test_rejects_nu_at_one(self):
        # (2,2,4,0.5,0,1) drives nu to 1 and violates the admissibility bound
        with pytest.raises(ValueError):
            nu_exponent(2, 2, 4, 0.5, 0.0, 1)

    def test_error_names_inequality(self):
        with pytest.raises(ValueError, match="q > p"):
            nu_exponent(2, 3, 2, 0.5, 0.0, 1)
        with pytest.raises(ValueError, match="beta"):
            nu_exponent(2, 2, 3, 0.5, -0.1, 1)
        with pytest.raises(ValueError, match="admissibility"):
            nu_exponent(2, 2, 2.1, 0.96, 0.0, 1)

import numpy as np
import pytest

from fracspec.frac1d import (
    marchaud_trunc,
    power_oracle,
    rl_derivative_l1,
    rl_integral_left,
    rl_integral_right,
)
from fracspec.geometry import GridFunction, build_ray_grid, interval
from fracspec.kernels import gamma

from conftest import rel_l2

ALPHAS = [0.25, 0.5, 0.75]
BETAS = [0.0, 1.0, 1.5]


def grid_1d(n):
    return build_ray_grid(interval(1.0), 1, n)


class TestPowerOracle:
    def test_frozen_coefficients(self):
        assert power_oracle(0.0, 0.5, "integral")(1.0) == pytest.approx(
            1.1283791670955126, rel=1e-12
        )
        assert power_oracle(1.5, 0.5, "derivative")(1.0) == pytest.approx(
            1.3293403881791370, rel=1e-12
        )

    def test_integral_then_derivative_is_identity(self):
        for beta in BETAS:
            for alpha in ALPHAS:
                c_int = power_oracle(beta, alpha, "integral")(1.0)
                c_der = power_oracle(beta + alpha, alpha, "derivative")(1.0)
                assert c_int * c_der == pytest.approx(1.0, rel=1e-12)

    def test_domain(self):
        with pytest.raises(ValueError):
            power_oracle(-0.5, 0.5, "integral")
        with pytest.raises(ValueError):
            power_oracle(1.0, 0.5, "gradient")


class TestIntegralOracleConsistency:
    @pytest.mark.parametrize("alpha", ALPHAS)
    @pytest.mark.parametrize("beta", BETAS)
    def test_relative_error(self, alpha, beta):
        g = grid_1d(512)
        f = GridFunction(g, g.flat_radii**beta)
        got = rl_integral_left(f, alpha).values
        want = power_oracle(beta, alpha, "integral")(g.flat_radii)
        err = rel_l2(g, got, want)
        if beta in (0.0, 1.0):
            # the piecewise-linear interpolant is exact
            assert err <= 1e-13
        else:
            assert err <= 1e-3

    @pytest.mark.parametrize("alpha", ALPHAS)
    def test_observed_order(self, alpha):
        errs = []
        for n in (128, 256, 512):
            g = grid_1d(n)
            f = GridFunction(g, g.flat_radii**1.5)
            got = rl_integral_left(f, alpha).values
            want = power_oracle(1.5, alpha, "integral")(g.flat_radii)
            errs.append(rel_l2(g, got, want))
        orders = [np.log2(a / b) for a, b in zip(errs, errs[1:])]
        assert min(orders) >= 1.5


class TestRightIntegral:
    def test_zero(self):
        g = grid_1d(64)
        out = rl_integral_right(GridFunction(g, np.zeros(64)), 0.5)
        assert np.all(out.values == 0.0)

    def test_mirrored_powers(self):
        g = grid_1d(512)
        x = g.flat_radii
        got = rl_integral_right(GridFunction(g, np.ones(512)), 0.5).values
        want = 1.1283791670955126 * np.sqrt(1.0 - x)
        assert rel_l2(g, got, want) <= 1e-13
        got = rl_integral_right(GridFunction(g, 1.0 - x), 0.5).values
        want = 0.75225277806367505 * (1.0 - x) ** 1.5
        assert rel_l2(g, got, want) <= 1e-3

    def test_mirror_symmetry(self):
        g = grid_1d(128)
        rng = np.random.default_rng(5)
        vals = rng.standard_normal(128)
        left = rl_integral_left(GridFunction(g, vals), 0.4).values
        right = rl_integral_right(GridFunction(g, vals[::-1]), 0.4).values
        assert np.allclose(left, right[::-1], atol=1e-14)


class TestMarchaud:
    def test_zero(self):
        g = grid_1d(64)
        out = marchaud_trunc(GridFunction(g, np.zeros(64)), 0.5, g.spacings[0])
        assert np.all(out.values == 0.0)

    def test_constant(self):
        # difference integrand vanishes, leaving r^-a/Gamma(1-a) away from the
        # truncation collar and eps^-a/Gamma(1-a) below it
        g = grid_1d(256)
        h = float(g.spacings[0])
        alpha = 0.5
        out = marchaud_trunc(GridFunction(g, np.ones(256)), alpha, h).values
        r = g.flat_radii
        expect = np.where(r >= h, r, h) ** (-alpha) / gamma(1.0 - alpha)
        assert np.allclose(out, expect, rtol=1e-13)

    def test_power_function(self):
        # relative error is dominated by the intrinsic O(eps^(1-alpha))
        # truncation of the difference quotient; frozen from a measured run
        g = grid_1d(512)
        h = float(g.spacings[0])
        f = GridFunction(g, g.flat_radii**1.5)
        got = marchaud_trunc(f, 0.5, h).values
        want = power_oracle(1.5, 0.5, "derivative")(g.flat_radii)
        assert rel_l2(g, got, want) <= 4e-2

    def test_right_branch(self):
        g = grid_1d(64)
        h = float(g.spacings[0])
        alpha = 0.5
        out = marchaud_trunc(GridFunction(g, np.ones(64)), alpha, h, side="right").values
        # last node sits inside the right truncation collar
        assert out[-1] == pytest.approx(h ** (-alpha) / gamma(1.0 - alpha), rel=1e-13)

    def test_eps_below_resolution(self):
        g = grid_1d(64)
        with pytest.raises(ValueError):
            marchaud_trunc(GridFunction(g, np.ones(64)), 0.5, 0.5 * float(g.spacings[0]))


class TestL1Derivative:
    @pytest.mark.parametrize("alpha", ALPHAS)
    @pytest.mark.parametrize("beta", BETAS)
    def test_power_oracle(self, alpha, beta):
        g = grid_1d(512)
        f = GridFunction(g, g.flat_radii**beta)
        got = rl_derivative_l1(f, alpha).values
        want = power_oracle(beta, alpha, "derivative")(g.flat_radii)
        err = rel_l2(g, got, want)
        if beta in (0.0, 1.0):
            assert err <= 1e-12
        else:
            assert err <= 1e-3

    @pytest.mark.parametrize("alpha", ALPHAS)
    def test_observed_order(self, alpha):
        errs = []
        for n in (128, 256, 512):
            g = grid_1d(n)
            f = GridFunction(g, g.flat_radii**1.5)
            got = rl_derivative_l1(f, alpha).values
            want = power_oracle(1.5, alpha, "derivative")(g.flat_radii)
            errs.append(rel_l2(g, got, want))
        orders = [np.log2(a / b) for a, b in zip(errs, errs[1:])]
        assert min(orders) >= 1.0


class TestLinearity:
    def test_random_superposition(self):
        g = grid_1d(128)
        h = float(g.spacings[0])
        rng = np.random.default_rng(11)
        f = rng.standard_normal(128) + 1j * rng.standard_normal(128)
        q = rng.standard_normal(128) + 1j * rng.standard_normal(128)
        a = complex(rng.standard_normal() + 1j * rng.standard_normal())
        b = complex(rng.standard_normal() + 1j * rng.standard_normal())
        for op in (
            lambda v: rl_integral_left(GridFunction(g, v), 0.5).values,
            lambda v: marchaud_trunc(GridFunction(g, v), 0.5, h).values,
            lambda v: rl_derivative_l1(GridFunction(g, v), 0.5).values,
        ):
            lhs = op(a * f + b * q)
            rhs = a * op(f) + b * op(q)
            scale = np.max(np.abs(rhs))
            assert np.max(np.abs(lhs - rhs)) <= 1e-12 * scale


class TestInversion:
    def test_derivative_inverts_integral(self):
        alpha = 0.25
        res = []
        for n in (128, 256):
            g = grid_1d(n)
            h = float(g.spacings[0])
            phi = GridFunction(g, g.flat_radii * (1.0 - g.flat_radii))
            recon = marchaud_trunc(rl_integral_left(phi, alpha), alpha, h).values
            res.append(rel_l2(g, recon, phi.values))
        assert res[-1] <= 1e-1
        assert res[1] < res[0]

import math

import numpy as np
import pytest

from fracspec.directional import (
    OperatorMatrix,
    adjoint_residual,
    assemble_matrix,
    dir_integral_left,
    dir_integral_left_matrix,
    dir_integral_right,
    dir_integral_right_matrix,
    inversion_residual,
    kipriyanov_formal,
    kipriyanov_formal_matrix,
    kipriyanov_trunc_left,
    kipriyanov_trunc_left_matrix,
    kipriyanov_trunc_right_matrix,
    operator_norm,
    psi_minus,
    psi_plus,
    representability_residual,
)
from fracspec.frac1d import (
    marchaud_trunc,
    rl_integral_left,
    rl_integral_right,
    trunc_derivative_block,
)
from fracspec.geometry import GridFunction, build_ray_grid, interval, sector
from fracspec.kernels import gamma

from bruteforce import frac_integral_oracle, trunc_left_derivative_oracle
from conftest import rel_l2


def small_sector(n_dirs=4, n_radial=16):
    return build_ray_grid(sector(1.0, math.pi / 2), n_dirs, n_radial)


class TestOneDimensionalReduction:
    def test_left_integral_matches_rl(self, unit_interval_256):
        g = unit_interval_256
        rng = np.random.default_rng(0)
        f = GridFunction(g, rng.standard_normal(g.n_nodes))
        a = dir_integral_left(g, f, 0.5).values
        b = rl_integral_left(f, 0.5).values
        assert np.max(np.abs(a - b)) <= 1e-14 * np.max(np.abs(b))

    def test_right_integral_matches_rl(self, unit_interval_256):
        g = unit_interval_256
        rng = np.random.default_rng(1)
        f = GridFunction(g, rng.standard_normal(g.n_nodes))
        a = dir_integral_right(g, f, 0.5).values
        b = rl_integral_right(f, 0.5).values
        assert np.max(np.abs(a - b)) <= 1e-14 * np.max(np.abs(b))

    def test_trunc_derivative_matches_marchaud(self, unit_interval_256):
        g = unit_interval_256
        h = float(g.spacings[0])
        rng = np.random.default_rng(2)
        f = GridFunction(g, rng.standard_normal(g.n_nodes))
        a = kipriyanov_trunc_left(g, f, 0.5, h).values
        b = marchaud_trunc(f, 0.5, h).values
        assert np.max(np.abs(a - b)) <= 1e-14 * np.max(np.abs(b))

    def test_formal_equals_marchaud_matrix(self, unit_interval_512):
        # one-dimensional reduction: the directional derivative collapses to
        # the truncated Marchaud operator, entry by entry
        g = unit_interval_512
        h = float(g.spacings[0])
        formal = kipriyanov_formal_matrix(g, 0.5).blocks[0]
        march = trunc_derivative_block(g.nodes[0], h, 0.5, h)
        assert np.max(np.abs(formal - march)) <= 1e-12


class TestWeightedIntegral:
    def test_zero(self):
        g = small_sector()
        out = dir_integral_left(g, GridFunction(g, np.zeros(g.n_nodes)), 0.5)
        assert np.all(out.values == 0.0)

    def test_brute_force_oracle(self, sector_128x32):
        g = sector_128x32
        ones = GridFunction(g, np.ones(g.n_nodes))
        got = dir_integral_left(g, ones, 0.5).by_ray()[0]
        for idx in (31, 63, 127):
            want = frac_integral_oracle(
                lambda t: np.ones_like(t), g.nodes[0][idx], 0.5, n_dim=2
            )
            assert abs(got[idx] - want) <= 1e-4 * abs(want)

    def test_right_integral_unweighted_power(self, sector_128x32):
        # no radial weight on the right side: per ray the constant maps to
        # (d - r)^alpha / Gamma(1 + alpha) exactly as in one dimension
        g = sector_128x32
        ones = GridFunction(g, np.ones(g.n_nodes))
        got = dir_integral_right(g, ones, 0.5).values
        want = np.sqrt(1.0 - g.flat_radii) / gamma(1.5)
        assert rel_l2(g, got, want) <= 1e-13


class TestPsi:
    def test_zero(self):
        g = small_sector()
        z = GridFunction(g, np.zeros(g.n_nodes))
        assert np.all(psi_plus(g, z, 0.5, 0.1).values == 0.0)
        assert np.all(psi_minus(g, z, 0.5, 0.1).values == 0.0)

    def test_left_lower_branch(self):
        # below the truncation radius the closed form (1/a)(eps^-a - r^-a) applies
        g = small_sector()
        alpha, eps = 0.5, 0.3
        ones = GridFunction(g, np.ones(g.n_nodes))
        got = psi_plus(g, ones, alpha, eps).by_ray()[0]
        r = g.nodes[0]
        mask = r < eps
        want = (eps ** (-alpha) - r[mask] ** (-alpha)) / alpha
        assert np.allclose(got[mask], want, rtol=1e-13)

    def test_right_lower_branch(self):
        g = small_sector()
        alpha, eps = 0.5, 0.3
        d = float(g.ray_lengths[0])
        ones = GridFunction(g, np.ones(g.n_nodes))
        got = psi_minus(g, ones, alpha, eps).by_ray()[0]
        r = g.nodes[0]
        mask = r > d - eps
        want = (eps ** (-alpha) - (d - r[mask]) ** (-alpha)) / alpha
        assert np.allclose(got[mask], want, rtol=1e-13)

    def test_constant_one_dim_vanishes(self, unit_interval_256):
        g = unit_interval_256
        h = float(g.spacings[0])
        ones = GridFunction(g, np.ones(g.n_nodes))
        got = psi_plus(g, ones, 0.5, h).values
        r = g.flat_radii
        # zero up to the rounding of the telescoped kernel-mass sums
        assert np.max(np.abs(got[r >= h])) <= 1e-11

    def test_eps_below_resolution(self):
        g = small_sector()
        with pytest.raises(ValueError):
            psi_plus(g, GridFunction(g, np.ones(g.n_nodes)), 0.5,
                     0.5 * float(g.spacings[0]))


class TestFormalDerivative:
    def test_zero(self):
        g = small_sector()
        out = kipriyanov_formal(g, GridFunction(g, np.zeros(g.n_nodes)), 0.5)
        assert np.all(out.values == 0.0)

    def test_brute_force_oracle_and_refinement(self):
        # the midpoint product integration of the difference quotient agrees
        # with a million-point quadrature of the truncated expression at the
        # 1e-2 level on the desk grid, improving under refinement
        alpha = 0.5
        fb = lambda t: (1.0 - t**2) ** 2
        rels = []
        for nr in (64, 128):
            g = build_ray_grid(sector(1.0, math.pi / 2), 4, nr)
            nodes = g.nodes[0]
            h = float(g.spacings[0])
            got = kipriyanov_formal_matrix(g, alpha).blocks[0] @ fb(nodes)
            want = np.array([
                trunc_left_derivative_oracle(fb, r, alpha, h, 2, npts=120_000)
                for r in nodes
            ])
            rels.append(
                math.sqrt(float(nodes @ (got - want) ** 2) / float(nodes @ want**2))
            )
        assert rels[-1] <= 2e-2
        assert rels[1] < rels[0]

    def test_two_assembly_paths_agree(self, sector_128x32):
        g = sector_128x32
        restr = kipriyanov_formal_matrix(g, 0.5).blocks[0]
        direct = kipriyanov_formal_matrix(g, 0.5, assembly="direct").blocks[0]
        assert np.max(np.abs(restr - direct)) <= 1e-8

    def test_boundary_warning(self):
        g = small_sector()
        with pytest.warns(UserWarning):
            kipriyanov_formal(g, GridFunction(g, np.ones(g.n_nodes)), 0.5)
        vanishing = GridFunction(
            g, (1.0 - (g.flat_radii / g.ray_lengths[0]) ** 2) ** 2
        )
        # the outermost midpoint node is not exactly on the boundary, so the
        # profile is scaled to vanish there
        vals = vanishing.by_ray()
        vals[:, -1] = 0.0
        import warnings

        with warnings.catch_warnings():
            warnings.simplefilter("error")
            kipriyanov_formal(g, GridFunction(g, vals.reshape(-1)), 0.5)


class TestAssembleMatrix:
    def test_zero_operator(self):
        g = small_sector()
        mat = assemble_matrix(g, lambda f: GridFunction(g, np.zeros(g.n_nodes)))
        assert np.all(mat.entries == 0.0)

    def test_matvec_consistency_and_blocks(self):
        g = small_sector()
        mat = assemble_matrix(g, lambda f: dir_integral_left(g, f, 0.5), tag="J")
        rng = np.random.default_rng(9)
        v = rng.standard_normal(g.n_nodes)
        direct = dir_integral_left(g, GridFunction(g, v), 0.5).values
        assert np.max(np.abs(mat.matvec(v) - direct)) <= 1e-13 * np.max(np.abs(direct))
        # per-ray block structure with exact zeros across rays
        assert len(mat.blocks) == g.n_dirs
        dense = mat.entries
        m = g.n_radial
        off = dense.copy()
        for j in range(g.n_dirs):
            off[j * m:(j + 1) * m, j * m:(j + 1) * m] = 0.0
        assert np.all(off == 0.0)

    def test_fast_builder_matches_functional_assembly(self):
        g = small_sector()
        fast = dir_integral_left_matrix(g, 0.5).entries
        slow = assemble_matrix(g, lambda f: dir_integral_left(g, f, 0.5)).entries
        assert np.max(np.abs(fast - slow)) <= 1e-13 * np.max(np.abs(fast))

    def test_rejects_nonlinear(self):
        g = small_sector()
        with pytest.raises(ValueError, match="linear"):
            assemble_matrix(g, lambda f: GridFunction(g, f.values**2))


class TestOperatorNorm:
    def test_zero_and_identity(self):
        g = small_sector()
        n = g.n_nodes
        zero = OperatorMatrix([np.zeros((n, n))], [slice(0, n)], g.flat_weights)
        assert operator_norm(g, zero) == 0.0
        eye = OperatorMatrix([np.eye(n)], [slice(0, n)], g.flat_weights)
        assert operator_norm(g, eye) == pytest.approx(1.0, rel=1e-8)

    def test_interval_bound(self, unit_interval_512):
        g = unit_interval_512
        norm = operator_norm(g, dir_integral_left_matrix(g, 0.5))
        assert norm <= 1.1283791670955126 * 1.01

    def test_matches_svd(self):
        g = small_sector()
        mat = dir_integral_left_matrix(g, 0.5)
        got = operator_norm(g, mat)
        d = np.sqrt(g.flat_weights)
        want = np.linalg.norm(d[:, None] * mat.entries / d[None, :], 2)
        assert got == pytest.approx(want, rel=1e-6)


class TestResiduals:
    def test_inversion_zero_guard(self, unit_interval_256):
        g = unit_interval_256
        assert inversion_residual(g, GridFunction(g, np.zeros(g.n_nodes)), 0.5) == 0.0

    def test_inversion_left_right_mirror(self, unit_interval_256):
        g = unit_interval_256
        phi = GridFunction(g, g.flat_radii * (1.0 - g.flat_radii))
        left = inversion_residual(g, phi, 0.25, "left")
        right = inversion_residual(g, phi, 0.25, "right")
        assert left == pytest.approx(right, rel=1e-10)

    def test_representability_zero_guard(self, unit_interval_256):
        g = unit_interval_256
        assert representability_residual(g, GridFunction(g, np.zeros(g.n_nodes)), 0.5) == 0.0

    def test_representable_input_small_residual(self, unit_interval_512):
        # f = J g is representable by construction, so the reconstruction
        # residual stays at the inversion level
        g = unit_interval_512
        src = GridFunction(g, np.sin(math.pi * g.flat_radii))
        f = dir_integral_left(g, src, 0.25)
        assert representability_residual(g, f, 0.25) <= 5e-2

    def test_adjoint_equal_weights_is_plain_transpose(self, unit_interval_256):
        # uniform Gram diagonal: the weighted adjoint reduces to the transpose
        g = unit_interval_256
        a = dir_integral_left_matrix(g, 0.5)
        assert np.array_equal(a.gram_adjoint().blocks[0], a.blocks[0].T)

    def test_adjoint_residual_decreases(self):
        vals = []
        for n in (128, 256):
            g = build_ray_grid(interval(1.0), 1, n)
            vals.append(adjoint_residual(g, 0.5, "integral"))
        assert vals[1] < vals[0] <= 1e-1

    def test_adjoint_derivative_kind(self, unit_interval_256):
        v = adjoint_residual(unit_interval_256, 0.5, "derivative")
        assert 0.0 < v < 1.0


class TestLinearity:
    def test_random_superposition_all_operators(self):
        g = small_sector()
        h = float(np.max(g.spacings))
        rng = np.random.default_rng(21)
        f = rng.standard_normal(g.n_nodes) + 1j * rng.standard_normal(g.n_nodes)
        q = rng.standard_normal(g.n_nodes) + 1j * rng.standard_normal(g.n_nodes)
        a = complex(rng.standard_normal(), rng.standard_normal())
        b = complex(rng.standard_normal(), rng.standard_normal())
        ops = [
            lambda v: dir_integral_left(g, GridFunction(g, v), 0.5).values,
            lambda v: dir_integral_right(g, GridFunction(g, v), 0.5).values,
            lambda v: psi_plus(g, GridFunction(g, v), 0.5, h).values,
            lambda v: kipriyanov_trunc_left(g, GridFunction(g, v), 0.5, h).values,
        ]
        for op in ops:
            lhs = op(a * f + b * q)
            rhs = a * op(f) + b * op(q)
            assert np.max(np.abs(lhs - rhs)) <= 1e-12 * np.max(np.abs(rhs))

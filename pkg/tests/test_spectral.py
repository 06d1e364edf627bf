import math

import numpy as np
import pytest

from fracspec.directional import OperatorMatrix, dir_integral_left_matrix
from fracspec.elliptic import assemble_comparator, assemble_L, coefficient_field
from fracspec.geometry import build_interior_grid, interval
from fracspec.spectral import (
    SectorConstants,
    accretivity_margin,
    eigen_bounds_check,
    general_eigs,
    hull_containment_margin,
    numerical_range,
    sector_fit,
    sym_eigs,
)


def plain_matrix(entries, weights=None):
    entries = np.asarray(entries, dtype=float)
    n = entries.shape[0]
    w = np.ones(n) if weights is None else np.asarray(weights, dtype=float)
    return OperatorMatrix([entries], [slice(0, n)], w)


class TestSymEigs:
    def test_diagonal(self):
        mat = plain_matrix(np.diag([3.0, -1.0, 2.0]))
        assert np.allclose(sym_eigs(mat), [-1.0, 2.0, 3.0])

    def test_dirichlet_laplacian(self):
        g = build_interior_grid(interval(1.0), 512)
        comp = assemble_comparator(g, 0, 1.0, 1.0)
        eigs = sym_eigs(comp) - 1.0
        for j in range(1, 6):
            assert abs(eigs[j - 1] - (j * math.pi) ** 2) / (j * math.pi) ** 2 <= 1e-2

    def test_count_matches_dimension(self):
        g = build_interior_grid(interval(1.0), 64)
        assert sym_eigs(assemble_comparator(g, 0, 1.0, 1.0)).size == g.n_nodes

    def test_rejects_nonsymmetric(self):
        g = build_interior_grid(interval(1.0), 64)
        with pytest.raises(ValueError, match="symmetric"):
            sym_eigs(dir_integral_left_matrix(g, 0.5))

    def test_gram_mismatch(self):
        mat = plain_matrix(np.eye(3))
        with pytest.raises(ValueError):
            sym_eigs(mat, gram=np.array([1.0, 2.0, 3.0]))


class TestGeneralEigs:
    def test_matches_sym_on_symmetric_input(self):
        g = build_interior_grid(interval(1.0), 128)
        comp = assemble_comparator(g, 0, 1.0, 1.0)
        sym = sym_eigs(comp)
        gen = general_eigs(comp)
        assert np.max(np.abs(gen.imag)) <= 1e-8
        assert np.allclose(np.sort(gen.real), sym, rtol=1e-8)

    def test_rotation_block(self):
        mat = plain_matrix([[0.0, -1.0], [1.0, 0.0]])
        eigs = general_eigs(mat)
        assert np.allclose(sorted(eigs, key=lambda z: z.imag), [-1j, 1j])


class TestNumericalRange:
    def test_hermitian_spans_spectral_interval(self):
        vals = np.array([-2.0, 0.5, 1.0, 3.0])
        mat = plain_matrix(np.diag(vals))
        pts = numerical_range(mat, n_angles=16, n_interior=20)
        assert np.max(np.abs(pts.imag)) <= 1e-12
        assert pts.real.min() == pytest.approx(vals.min(), abs=1e-10)
        assert pts.real.max() == pytest.approx(vals.max(), abs=1e-10)

    def test_identity_single_point(self):
        mat = plain_matrix(np.eye(5))
        pts = numerical_range(mat, n_angles=8, n_interior=10)
        assert np.allclose(pts, 1.0, atol=1e-12)

    def test_samples_are_certificates(self):
        g = build_interior_grid(interval(1.0), 32)
        a_l = assemble_L(g, coefficient_field(g.domain), 0.5)
        pts, vecs = numerical_range(a_l, n_angles=8, n_interior=5, return_vectors=True)
        w = g.flat_weights
        dense = a_l.entries
        for z, v in zip(pts, vecs):
            num = complex(np.conj(v) @ (w * (dense @ v)))
            den = complex(np.conj(v) @ (w * v))
            assert abs(z - num / den) <= 1e-10 * max(1.0, abs(z))

    def test_angle_count_validated(self):
        with pytest.raises(ValueError):
            numerical_range(plain_matrix(np.eye(3)), n_angles=3)

    def test_spectrum_inside_sample_hull(self):
        # eigenvalues lie in the closure of the numerical range, hence in the
        # convex hull of its boundary samples (up to a 1e-6 inflation)
        g = build_interior_grid(interval(1.0), 128)
        a_l = assemble_L(g, coefficient_field(g.domain), 0.5)
        pts = numerical_range(a_l, n_angles=32, seed=1)
        eigs = general_eigs(a_l)
        assert hull_containment_margin(eigs, pts) <= 1e-6

    def test_hull_margin_detects_outside_point(self):
        samples = np.array([0.0, 1.0, 1.0j])
        assert hull_containment_margin([5.0 + 0.0j], samples) > 1.0


class TestAccretivityMargin:
    def test_identity(self):
        assert accretivity_margin(plain_matrix(np.eye(4))) == pytest.approx(1.0)

    def test_skew_part_ignored(self):
        sym = np.diag([1.0, 2.0])
        skew = np.array([[0.0, 5.0], [-5.0, 0.0]])
        assert accretivity_margin(plain_matrix(sym + skew)) == pytest.approx(
            accretivity_margin(plain_matrix(sym))
        )


class TestSectorFit:
    def test_real_points(self):
        fit = sector_fit([0.5, 1.5, 3.0])
        assert fit.gamma == 0.5
        assert fit.theta == 0.0
        assert not fit.degenerate

    def test_vertical_pair_degenerate(self):
        fit = sector_fit([1.0 + 1.0j, 1.0 - 1.0j])
        assert fit.gamma == 1.0
        assert fit.theta == pytest.approx(math.pi / 2.0)
        assert fit.degenerate

    def test_wedge_angle(self):
        fit = sector_fit([0.0, 1.0 + 1.0j])
        assert fit.theta == pytest.approx(math.pi / 4.0)

    def test_empty(self):
        with pytest.raises(ValueError):
            sector_fit([])


class TestEigenBounds:
    def test_equal_lists(self):
        e = np.array([1.0, 2.0, 3.0])
        v = eigen_bounds_check(e, e, e)
        assert v.passed
        assert v.lower_margin == 0.0 and v.upper_margin == 0.0

    def test_violation_detected(self):
        v = eigen_bounds_check([2.0, 3.0], [1.0, 4.0], [5.0, 6.0])
        assert not v.passed
        assert v.lower_margin == pytest.approx(-1.0)

    def test_unsorted_rejected(self):
        with pytest.raises(ValueError, match="sorted"):
            eigen_bounds_check([2.0, 1.0], [1.0, 2.0], [3.0, 4.0])

    def test_length_mismatch(self):
        with pytest.raises(ValueError, match="length"):
            eigen_bounds_check([1.0], [1.0, 2.0], [3.0, 4.0])


class TestSectorConstants:
    def test_derived_quantities(self):
        c = SectorConstants(
            a0=1.0, a1=1.0, K=1.0, delta=0.5, eps_young=1.0, C2=1.0, C3=1.0,
            nu=0.75, mu=0.56, inf_rho=1.0,
        )
        assert c.k > 0.0
        assert 0.0 < c.theta < math.pi / 2.0
        # k = a0 / (delta^(2-2nu) C3 + a1)
        assert c.k == pytest.approx(1.0 / (0.5**0.5 + 1.0), rel=1e-12)
        assert c.gamma == pytest.approx(0.56 - c.k * (0.5**-1.5 + 1.0), rel=1e-12)

    def test_validation(self):
        with pytest.raises(ValueError):
            SectorConstants(a0=-1.0, a1=1.0, K=1.0, delta=0.5, eps_young=1.0,
                            C2=1.0, C3=1.0, nu=0.75, mu=0.5, inf_rho=1.0)
        with pytest.raises(ValueError):
            SectorConstants(a0=1.0, a1=1.0, K=1.0, delta=0.5, eps_young=1.0,
                            C2=1.0, C3=1.0, nu=1.5, mu=0.5, inf_rho=1.0)

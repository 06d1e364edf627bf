"""Second-order elliptic operators with a fractional final term.

L u = -(a u')' + rho * D^alpha u on the canonical 1-D testbed (vertex grid,
Dirichlet rows eliminated, so the pure diffusion matrix is the textbook
tridiagonal), and the conservative 5-point polar stencil on the 2-D sector.
The formal adjoint swaps the fractional factor order, L+ u = -(a u')' +
D^alpha_right(rho u), and the real part H is taken either as the exact
G-symmetric part of L or as (L + L+)/2; both are kept and their gap is a
convergence diagnostic.

Coefficients are isotropic radial profiles a(r), rho(r); the matrix-valued
coefficient of the continuum operator is a(r) * I.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .directional import (
    OperatorMatrix,
    kipriyanov_formal_matrix,
    kipriyanov_trunc_right_matrix,
)
from .geometry import RayGrid
from .kernels import mu_theoretical

__all__ = [
    "CoefficientField",
    "make_profile",
    "coefficient_field",
    "assemble_L",
    "assemble_L_plus",
    "assemble_H",
    "h_variant_gap",
    "assemble_comparator",
    "comparator_defaults",
    "assemble_form_t",
    "green_form_residual",
    "form_order_check",
    "FormOrderVerdict",
]


@dataclass(frozen=True)
class CoefficientField:
    """Isotropic coefficient pair for the elliptic operator.

    a, rho      : radial profiles (callables of the distance r from the pole)
    a0          : ellipticity constant, inf a
    a1          : sup of the Frobenius norm of a*I, i.e. sqrt(n) * sup a
    lam, lip_m  : Holder exponent and constant of rho
    inf_rho     : positive lower bound of rho
    rho_monotone: rho non-increasing along rays (sharpens the accretivity
                  constant)
    """

    a: Callable
    rho: Callable
    a0: float
    a1: float
    lam: float
    lip_m: float
    inf_rho: float
    rho_monotone: bool = True

    def a_matrix(self, r: float, n: int) -> np.ndarray:
        """Matrix-valued coefficient a(r) * I of the continuum operator."""
        return float(self.a(np.asarray(r))) * np.eye(n)

    def validate_on_samples(self, domain, n_samples: int = 200, seed: int = 0):
        """Sampled invariant checks: ellipticity, rho > 0, Holder bound."""
        rng = np.random.default_rng(seed)
        length = domain.diam
        r = rng.uniform(0.0, length, n_samples)
        a_vals = np.asarray(self.a(r), dtype=float)
        if np.any(a_vals < self.a0 - 1e-12):
            raise ValueError("ellipticity violated: a(r) < a0 on a sample")
        rho_vals = np.asarray(self.rho(r), dtype=float)
        if np.any(rho_vals < self.inf_rho - 1e-12):
            raise ValueError("rho(r) < inf_rho on a sample")
        s = rng.uniform(0.0, length, n_samples)
        rho_s = np.asarray(self.rho(s), dtype=float)
        holder = np.abs(rho_vals - rho_s) - self.lip_m * np.abs(r - s) ** self.lam
        if np.any(holder > 1e-10):
            raise ValueError("Holder bound |rho(r)-rho(s)| <= M |r-s|^lam violated")
        dim = domain.dim
        for _ in range(8):
            xi = rng.standard_normal(dim)
            rr = float(rng.uniform(0.0, length))
            quad = xi @ self.a_matrix(rr, dim) @ xi
            if quad < self.a0 * (xi @ xi) - 1e-10:
                raise ValueError("ellipticity xi^T a xi >= a0 |xi|^2 violated")


def make_profile(name: str, scale: float, value: float = 1.0, slope: float = 0.0,
                 amp: float = 0.0, freq: int = 1):
    """Named radial coefficient profile on [0, scale].

    constant         : value
    linear-ramp      : value + slope * r / scale
    cosine-perturbed : value * (1 + amp * cos(freq * pi * r / scale))
    Returns (callable, lam, lip_m, inf, sup, monotone).
    """
    if name == "constant":
        fn = lambda r: value * np.ones_like(np.asarray(r, dtype=float))
        return fn, 1.0, 0.0, value, value, True
    if name == "linear-ramp":
        fn = lambda r: value + slope * np.asarray(r, dtype=float) / scale
        lo, hi = sorted((value, value + slope))
        return fn, 1.0, abs(slope) / scale, lo, hi, slope <= 0.0
    if name == "cosine-perturbed":
        w = freq * math.pi / scale

        def fn(r):
            return value * (1.0 + amp * np.cos(w * np.asarray(r, dtype=float)))

        return fn, 1.0, value * abs(amp) * w, value * (1.0 - abs(amp)), \
            value * (1.0 + abs(amp)), False
    raise ValueError(f"unknown profile {name!r}")


def coefficient_field(domain, a_name: str = "constant", rho_name: str = "constant",
                      a_params: dict | None = None,
                      rho_params: dict | None = None) -> CoefficientField:
    """Build a CoefficientField from named presets over the given domain."""
    scale = domain.diam
    a_fn, _, _, a_lo, a_hi, _ = make_profile(a_name, scale, **(a_params or {}))
    rho_fn, lam, lip_m, rho_lo, _, monotone = make_profile(
        rho_name, scale, **(rho_params or {})
    )
    if a_lo <= 0.0:
        raise ValueError(f"coefficient a must stay positive (inf a = {a_lo})")
    if rho_lo <= 0.0:
        raise ValueError(f"weight rho must stay positive (inf rho = {rho_lo})")
    return CoefficientField(
        a=a_fn,
        rho=rho_fn,
        a0=a_lo,
        a1=math.sqrt(domain.dim) * a_hi,
        lam=lam,
        lip_m=lip_m,
        inf_rho=rho_lo,
        rho_monotone=monotone,
    )


def _check_elliptic_grid(grid: RayGrid):
    if grid.n == 1:
        if grid.node_offset != 1.0:
            raise ValueError(
                "1-D elliptic assembly requires the interior (vertex) grid; "
                "use geometry.build_interior_grid"
            )
        cells = grid.n_radial + 1
    elif grid.domain.kind == "sector":
        if grid.node_offset != 0.5:
            raise ValueError("2-D elliptic assembly requires a midpoint ray grid")
        cells = grid.n_radial
    else:
        raise ValueError("elliptic assembly supports interval and sector grids only")
    if cells < 16:
        raise ValueError(f"grid too coarse for the elliptic stencil ({cells} cells < 16)")


def _interval_diffusion(grid: RayGrid, a_fn) -> np.ndarray:
    """Conservative -(a u')' on the vertex grid, Dirichlet ends eliminated."""
    r = grid.nodes[0]
    h = float(grid.spacings[0])
    m = r.size
    faces = (np.arange(m + 1) + 0.5) * h
    af = np.asarray(a_fn(faces), dtype=float)
    mat = np.zeros((m, m))
    idx = np.arange(m)
    mat[idx, idx] = (af[:-1] + af[1:]) / h**2
    mat[idx[:-1], idx[:-1] + 1] = -af[1:-1] / h**2
    mat[idx[1:], idx[1:] - 1] = -af[1:-1] / h**2
    return mat


def _sector_diffusion(grid: RayGrid, a_fn) -> np.ndarray:
    """Conservative 5-point polar stencil -div(a grad u) on the sector.

    Radial fluxes carry the r metric factor (the r = 0 face has zero
    measure, so the vertex needs no boundary condition); angular fluxes
    carry 1/r^2.  Dirichlet holds on the outer arc and both straight edges
    via half-cell fluxes.
    """
    nr, nd = grid.n_radial, grid.n_dirs
    hr = float(grid.spacings[0])
    hchi = float(grid.dir_weights[0])
    radius = grid.domain.radius
    r = grid.nodes[0]
    rf = np.concatenate(([0.0], 0.5 * (r[:-1] + r[1:]), [radius]))
    a_rad = np.asarray(a_fn(rf), dtype=float)
    a_ang = np.asarray(a_fn(r), dtype=float)
    m = nr * nd
    mat = np.zeros((m, m))
    for j in range(nd):
        base = j * nr
        for i in range(nr):
            row = base + i
            scale = 1.0 / (r[i] * hr)
            if i < nr - 1:
                c = rf[i + 1] * a_rad[i + 1] / hr * scale
                mat[row, row] += c
                mat[row, row + 1] -= c
            else:
                mat[row, row] += rf[nr] * a_rad[nr] / (0.5 * hr) * scale
            if i > 0:
                c = rf[i] * a_rad[i] / hr * scale
                mat[row, row] += c
                mat[row, row - 1] -= c
            cang = a_ang[i] / (r[i] ** 2 * hchi**2)
            if j < nd - 1:
                mat[row, row] += cang
                mat[row, row + nr] -= cang
            else:
                mat[row, row] += 2.0 * cang
            if j > 0:
                mat[row, row] += cang
                mat[row, row - nr] -= cang
            else:
                mat[row, row] += 2.0 * cang
    return mat


def _diffusion(grid: RayGrid, coeffs: CoefficientField) -> np.ndarray:
    if grid.n == 1:
        return _interval_diffusion(grid, coeffs.a)
    return _sector_diffusion(grid, coeffs.a)


def _single_block(grid: RayGrid, dense: np.ndarray, tag: str) -> OperatorMatrix:
    return OperatorMatrix([dense], [slice(0, grid.n_nodes)], grid.flat_weights, tag=tag)


def assemble_L(grid: RayGrid, coeffs: CoefficientField, alpha: float) -> OperatorMatrix:
    """L = -(a u')' + rho * D^alpha u with Dirichlet elimination."""
    _check_elliptic_grid(grid)
    dense = _diffusion(grid, coeffs)
    rho = np.asarray(coeffs.rho(grid.flat_radii), dtype=float)
    frac = kipriyanov_formal_matrix(grid, alpha).entries
    dense = dense + rho[:, None] * frac
    return _single_block(grid, dense, tag=f"L(alpha={alpha})")


def assemble_L_plus(grid: RayGrid, coeffs: CoefficientField, alpha: float) -> OperatorMatrix:
    """Formal adjoint L+ = -(a u')' + D^alpha_right(rho u)."""
    _check_elliptic_grid(grid)
    dense = _diffusion(grid, coeffs)
    rho = np.asarray(coeffs.rho(grid.flat_radii), dtype=float)
    eps = float(np.max(grid.spacings))
    frac = kipriyanov_trunc_right_matrix(grid, alpha, eps).entries
    dense = dense + frac * rho[None, :]
    return _single_block(grid, dense, tag=f"L+(alpha={alpha})")


def assemble_H(grid: RayGrid, coeffs: CoefficientField, alpha: float,
               variant: str = "sym") -> OperatorMatrix:
    """Real part of L.

    variant="sym" is the exact G-symmetric part (A_L + G^-1 A_L^T G)/2;
    variant="average" is (A_L + A_{L+})/2.  Their gap shrinks with the
    adjointness residual and is reported by h_variant_gap.
    """
    if variant == "sym":
        mat = assemble_L(grid, coeffs, alpha).gram_symmetric_part()
        mat.tag = f"H_sym(alpha={alpha})"
        return mat
    if variant == "average":
        lmat = assemble_L(grid, coeffs, alpha)
        lplus = assemble_L_plus(grid, coeffs, alpha)
        dense = 0.5 * (lmat.entries + lplus.entries)
        return _single_block(grid, dense, tag=f"H_avg(alpha={alpha})")
    raise ValueError(f"variant must be 'sym' or 'average', got {variant!r}")


def h_variant_gap(grid: RayGrid, coeffs: CoefficientField, alpha: float) -> float:
    """Relative spectral-norm gap between the two H realizations."""
    sym = assemble_H(grid, coeffs, alpha, variant="sym").entries
    avg = assemble_H(grid, coeffs, alpha, variant="average").entries
    return float(np.linalg.norm(sym - avg, 2) / np.linalg.norm(sym, 2))


def assemble_comparator(grid: RayGrid, k: int, a_const: float,
                        rho_const: float) -> OperatorMatrix:
    """Constant-coefficient comparator -a_k Laplace + rho_k, same elimination."""
    if k not in (0, 1):
        raise ValueError(f"comparator index must be 0 or 1, got {k}")
    if a_const <= 0.0 or rho_const <= 0.0:
        raise ValueError(
            f"comparator constants must be positive, got a={a_const}, rho={rho_const}"
        )
    _check_elliptic_grid(grid)
    const = lambda r: a_const * np.ones_like(np.asarray(r, dtype=float))
    if grid.n == 1:
        dense = _interval_diffusion(grid, const)
    else:
        dense = _sector_diffusion(grid, const)
    dense = dense + rho_const * np.eye(grid.n_nodes)
    return _single_block(grid, dense, tag=f"L{k}(a={a_const},rho={rho_const})")


def _scaled_sym(matrix: OperatorMatrix) -> np.ndarray:
    d = np.sqrt(matrix.weights)
    s = d[:, None] * matrix.entries / d[None, :]
    return 0.5 * (s + s.T)


def comparator_defaults(grid: RayGrid, coeffs: CoefficientField,
                        alpha: float) -> dict:
    """Comparator constants sandwiching H.

    Lower: half the ellipticity constant and half of min(mu * inf rho,
    inf rho).  Upper: twice the coefficient bound a1 and twice the numerical
    estimate of the form bound C1 (largest eigenvalue of the symmetrized L
    against the discrete H1 norm matrix Laplace(1) + I); form_order_check
    certifies the resulting ordering instead of assuming it.
    """
    from scipy.linalg import eigh

    mu = mu_theoretical(
        alpha,
        grid.n,
        grid.domain.diam,
        lam=coeffs.lam,
        lip_m=coeffs.lip_m,
        inf_rho=coeffs.inf_rho,
        monotone=coeffs.rho_monotone,
    )
    hmat = assemble_H(grid, coeffs, alpha, variant="sym")
    sobolev = _diffusion(grid, coefficient_field(grid.domain)) + np.eye(grid.n_nodes)
    d = np.sqrt(hmat.weights)
    s_h = _scaled_sym(hmat)
    s_s = d[:, None] * sobolev / d[None, :]
    s_s = 0.5 * (s_s + s_s.T)
    c1_hat = float(eigh(s_h, s_s, eigvals_only=True)[-1])
    return {
        "a0_const": 0.5 * coeffs.a0,
        "rho0_const": 0.5 * min(mu * coeffs.inf_rho, coeffs.inf_rho),
        "a1_const": 2.0 * coeffs.a1,
        "rho1_const": 2.0 * c1_hat,
        "c1_hat": c1_hat,
        "mu": mu,
    }


def _gradient_form(grid: RayGrid, a_fn) -> np.ndarray:
    """Face-difference assembly of sum a |grad u|^2 as a form matrix."""
    if grid.n == 1:
        r = grid.nodes[0]
        h = float(grid.spacings[0])
        m = r.size
        faces = (np.arange(m + 1) + 0.5) * h
        af = np.asarray(a_fn(faces), dtype=float)
        diff = np.zeros((m + 1, m))
        idx = np.arange(m)
        diff[idx, idx] = 1.0 / h
        diff[idx + 1, idx] -= 1.0 / h
        c = af * h
        return diff.T @ (c[:, None] * diff)
    nr, nd = grid.n_radial, grid.n_dirs
    hr = float(grid.spacings[0])
    hchi = float(grid.dir_weights[0])
    radius = grid.domain.radius
    r = grid.nodes[0]
    rf = np.concatenate((0.5 * (r[:-1] + r[1:]), [radius]))
    a_rad = np.asarray(a_fn(rf), dtype=float)
    a_ang = np.asarray(a_fn(r), dtype=float)
    m = nr * nd
    form = np.zeros((m, m))

    def add_face(i1, i2, grad_coeff, measure):
        # contribution c * (u[i2] - u[i1]) (v[i2] - v[i1]) with one index
        # possibly None for an eliminated Dirichlet neighbour
        c = grad_coeff * measure
        if i1 is None:
            form[i2, i2] += c
            return
        if i2 is None:
            form[i1, i1] += c
            return
        form[i1, i1] += c
        form[i2, i2] += c
        form[i1, i2] -= c
        form[i2, i1] -= c

    for j in range(nd):
        base = j * nr
        for i in range(nr):
            row = base + i
            if i < nr - 1:
                add_face(row, row + 1, a_rad[i] / hr**2, rf[i] * hr * hchi)
            else:
                add_face(row, None, a_rad[nr - 1] / (0.5 * hr) ** 2,
                         rf[nr - 1] * 0.5 * hr * hchi)
            if j < nd - 1:
                add_face(row, row + nr, a_ang[i] / (r[i] * hchi) ** 2,
                         r[i] * hr * hchi)
            else:
                add_face(row, None, a_ang[i] / (r[i] * 0.5 * hchi) ** 2,
                         r[i] * hr * 0.5 * hchi)
            if j == 0:
                add_face(None, row, a_ang[i] / (r[i] * 0.5 * hchi) ** 2,
                         r[i] * hr * 0.5 * hchi)
    return form


def assemble_form_t(grid: RayGrid, coeffs: CoefficientField, alpha: float):
    """Sesquilinear form matrices (T, T*) with T[u, v] = v^H T u.

    T combines one-sided difference gradients at cell interfaces with the
    weighted fractional term (rho D^alpha u, v)_G; T* is the conjugate
    transpose, so h = (T + T*)/2 is the Hermitian form.
    """
    _check_elliptic_grid(grid)
    grad = _gradient_form(grid, coeffs.a)
    rho = np.asarray(coeffs.rho(grid.flat_radii), dtype=float)
    frac = kipriyanov_formal_matrix(grid, alpha).entries
    t_mat = grad + grid.flat_weights[:, None] * rho[:, None] * frac
    return t_mat, t_mat.conj().T


def green_form_residual(grid: RayGrid, coeffs: CoefficientField, alpha: float) -> float:
    """Max defect of (A_L u, v)_G = T[u, v] over a boundary-vanishing basis."""
    lmat = assemble_L(grid, coeffs, alpha)
    t_mat, _ = assemble_form_t(grid, coeffs, alpha)
    length = grid.domain.length if grid.n == 1 else grid.domain.radius
    basis = []
    if grid.n == 1:
        for k in range(1, 4):
            basis.append(np.sin(k * math.pi * grid.flat_radii / length))
    else:
        chi = np.repeat(grid.chis, grid.n_radial)
        for k in range(1, 3):
            for mm in range(1, 3):
                basis.append(
                    np.sin(k * math.pi * grid.flat_radii / length)
                    * np.sin(mm * math.pi * chi / grid.domain.angle)
                )
    w = grid.flat_weights
    worst = 0.0
    for u in basis:
        norm_u = math.sqrt(float(u @ (w * u)))
        lu = lmat.matvec(u)
        for v in basis:
            norm_v = math.sqrt(float(v @ (w * v)))
            left = float(v @ (w * lu))
            right = float(v @ (t_mat @ u))
            worst = max(worst, abs(left - right) / (norm_u * norm_v))
    return worst


@dataclass(frozen=True)
class FormOrderVerdict:
    """Margins of the discrete form ordering L0 <= H <= L1."""

    lower_margin: float
    upper_margin: float
    passed: bool


def form_order_check(h_mat: OperatorMatrix, l0_mat: OperatorMatrix,
                     l1_mat: OperatorMatrix, gram: np.ndarray) -> FormOrderVerdict:
    """Certify L0 <= H <= L1 via generalized minimum eigenvalues against G."""
    gram = np.asarray(gram, dtype=float)
    for mat in (h_mat, l0_mat, l1_mat):
        if mat.n != gram.size or not np.allclose(mat.weights, gram):
            raise ValueError("form_order_check requires matrices on one grid")
    lower = float(np.linalg.eigvalsh(_scaled_sym(h_mat - l0_mat))[0])
    upper = float(np.linalg.eigvalsh(_scaled_sym(l1_mat - h_mat))[0])
    return FormOrderVerdict(
        lower_margin=lower,
        upper_margin=upper,
        passed=bool(lower >= -1e-10 and upper >= -1e-10),
    )

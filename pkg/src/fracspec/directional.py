"""Directional fractional operators on ray grids and their matrix forms.

The left-side integral carries the radial weight (t/r)^(n-1); the right-side
one deliberately does not (the weighted-measure adjoint computation is what
makes the asymmetry consistent).  All operators act ray by ray, so matrices
are stored as per-ray dense blocks; the dense entries view is materialized
on demand.  The weighted adjoint G^-1 A^T G realizes the L2(Omega) adjoint,
with G the diagonal of quadrature weights.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import frac1d
from .geometry import GridFunction, RayGrid
from .kernels import c_n_alpha, gamma

__all__ = [
    "OperatorMatrix",
    "assemble_matrix",
    "dir_integral_left",
    "dir_integral_right",
    "psi_plus",
    "psi_minus",
    "kipriyanov_trunc_left",
    "kipriyanov_trunc_right",
    "kipriyanov_formal",
    "dir_integral_left_matrix",
    "dir_integral_right_matrix",
    "kipriyanov_trunc_left_matrix",
    "kipriyanov_trunc_right_matrix",
    "kipriyanov_formal_matrix",
    "inversion_residual",
    "representability_residual",
    "adjoint_residual",
    "operator_norm",
    "PowerIterationError",
]


class PowerIterationError(RuntimeError):
    """Power iteration failed to converge within the iteration cap."""


@dataclass(eq=False)
class OperatorMatrix:
    """Dense matrix of a discretized linear operator plus its Gram diagonal.

    blocks[b] acts on the index range slices[b]; operators that act ray by
    ray store one block per ray, everything else is a single block.  weights
    is the flattened quadrature-weight vector (the Gram matrix diagonal).
    """

    blocks: list
    slices: list
    weights: np.ndarray
    tag: str = ""
    _dense: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        self.weights = np.asarray(self.weights, dtype=float)
        if np.any(self.weights <= 0.0):
            raise ValueError("gram diagonal must be strictly positive")
        covered = sum(s.stop - s.start for s in self.slices)
        if covered != self.n:
            raise ValueError("block slices do not cover the grid")
        for blk, s in zip(self.blocks, self.slices):
            if blk.shape != (s.stop - s.start,) * 2:
                raise ValueError("block shape does not match its slice")

    @property
    def n(self) -> int:
        return self.weights.size

    @property
    def entries(self) -> np.ndarray:
        """Dense matrix over all grid nodes (assembled lazily)."""
        if self._dense is None:
            if len(self.blocks) == 1:
                self._dense = self.blocks[0]
            else:
                dtype = np.result_type(*[b.dtype for b in self.blocks])
                dense = np.zeros((self.n, self.n), dtype=dtype)
                for blk, s in zip(self.blocks, self.slices):
                    dense[s, s] = blk
                self._dense = dense
        return self._dense

    def matvec(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v)
        if v.shape != (self.n,):
            raise ValueError(f"vector must have {self.n} entries, got {v.shape}")
        out = np.zeros(self.n, dtype=np.result_type(v.dtype, self.blocks[0].dtype))
        for blk, s in zip(self.blocks, self.slices):
            out[s] = blk @ v[s]
        return out

    def gram_adjoint(self) -> "OperatorMatrix":
        """Weighted adjoint G^-1 A^T G, block by block."""
        blocks = []
        for blk, s in zip(self.blocks, self.slices):
            w = self.weights[s]
            blocks.append((blk.T * w[None, :]) / w[:, None])
        return OperatorMatrix(blocks, list(self.slices), self.weights,
                              tag=f"adjoint({self.tag})")

    def gram_symmetric_part(self) -> "OperatorMatrix":
        """(A + G^-1 A^T G) / 2."""
        adj = self.gram_adjoint()
        blocks = [0.5 * (a + b) for a, b in zip(self.blocks, adj.blocks)]
        return OperatorMatrix(blocks, list(self.slices), self.weights,
                              tag=f"sym({self.tag})")

    def __add__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        return self._combine(other, 1.0)

    def __sub__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        return self._combine(other, -1.0)

    def _combine(self, other: "OperatorMatrix", sign: float) -> "OperatorMatrix":
        if other.n != self.n or not np.array_equal(other.weights, self.weights):
            raise ValueError("operator matrices live on different grids")
        if self.slices == other.slices:
            blocks = [a + sign * b for a, b in zip(self.blocks, other.blocks)]
            return OperatorMatrix(blocks, list(self.slices), self.weights,
                                  tag=f"{self.tag}{'+' if sign > 0 else '-'}{other.tag}")
        dense = self.entries + sign * other.entries
        return OperatorMatrix([dense], [slice(0, self.n)], self.weights,
                              tag=f"{self.tag}{'+' if sign > 0 else '-'}{other.tag}")


def _ray_slices(grid: RayGrid) -> list:
    m = grid.n_radial
    return [slice(j * m, (j + 1) * m) for j in range(grid.n_dirs)]


def _per_ray_matrix(grid: RayGrid, block_fn: Callable, tag: str) -> OperatorMatrix:
    """Assemble one block per ray; identical rays share a single array."""
    blocks = []
    cache = {}
    for j in range(grid.n_dirs):
        key = (float(grid.ray_lengths[j]), float(grid.spacings[j]))
        if key not in cache:
            cache[key] = block_fn(grid.nodes[j], float(grid.spacings[j]))
        blocks.append(cache[key])
    return OperatorMatrix(blocks, _ray_slices(grid), grid.flat_weights, tag=tag)


def dir_integral_left_matrix(grid: RayGrid, alpha: float) -> OperatorMatrix:
    wp = grid.n - 1
    return _per_ray_matrix(
        grid,
        lambda nodes, h: frac1d.frac_integral_block(nodes, h, alpha, weight_pow=wp),
        tag=f"J_left(alpha={alpha})",
    )


def dir_integral_right_matrix(grid: RayGrid, alpha: float) -> OperatorMatrix:
    return _per_ray_matrix(
        grid,
        lambda nodes, h: frac1d._flip(frac1d.frac_integral_block(nodes, h, alpha)),
        tag=f"J_right(alpha={alpha})",
    )


def _max_spacing(grid: RayGrid) -> float:
    return float(np.max(grid.spacings))


def psi_plus_matrix(grid: RayGrid, alpha: float, epsilon: float) -> OperatorMatrix:
    if epsilon < _max_spacing(grid) * (1.0 - 1e-12):
        raise ValueError(
            f"epsilon={epsilon} is below the grid resolution {_max_spacing(grid)}"
        )
    wp = grid.n - 1
    return _per_ray_matrix(
        grid,
        lambda nodes, h: frac1d.psi_block(nodes, h, alpha, epsilon, weight_pow=wp),
        tag=f"psi_plus(alpha={alpha},eps={epsilon})",
    )


def psi_minus_matrix(grid: RayGrid, alpha: float, epsilon: float) -> OperatorMatrix:
    if epsilon < _max_spacing(grid) * (1.0 - 1e-12):
        raise ValueError(
            f"epsilon={epsilon} is below the grid resolution {_max_spacing(grid)}"
        )
    return _per_ray_matrix(
        grid,
        lambda nodes, h: frac1d._flip(frac1d.psi_block(nodes, h, alpha, epsilon)),
        tag=f"psi_minus(alpha={alpha},eps={epsilon})",
    )


def kipriyanov_trunc_left_matrix(grid: RayGrid, alpha: float,
                                 epsilon: float) -> OperatorMatrix:
    if epsilon < _max_spacing(grid) * (1.0 - 1e-12):
        raise ValueError(
            f"epsilon={epsilon} is below the grid resolution {_max_spacing(grid)}"
        )
    wp = grid.n - 1
    return _per_ray_matrix(
        grid,
        lambda nodes, h: frac1d.trunc_derivative_block(nodes, h, alpha, epsilon, weight_pow=wp),
        tag=f"D_left(alpha={alpha},eps={epsilon})",
    )


def kipriyanov_trunc_right_matrix(grid: RayGrid, alpha: float,
                                  epsilon: float) -> OperatorMatrix:
    if epsilon < _max_spacing(grid) * (1.0 - 1e-12):
        raise ValueError(
            f"epsilon={epsilon} is below the grid resolution {_max_spacing(grid)}"
        )

    def block(nodes, h):
        return frac1d._flip(frac1d.trunc_derivative_block(nodes, h, alpha, epsilon))

    return _per_ray_matrix(grid, block, tag=f"D_right(alpha={alpha},eps={epsilon})")


def kipriyanov_formal_matrix(grid: RayGrid, alpha: float,
                             assembly: str = "restriction") -> OperatorMatrix:
    """Matrix of the formal directional derivative, eps tied to the spacing.

    assembly="restriction" realizes it as the truncated left-side derivative
    (the operator is a restriction of that extension); assembly="direct"
    assembles the formal expression itself, evaluating the weighted-power
    moment sum analytically.  The two differ only in how the scalar zero
    order coefficient is accumulated: the telescoping Gamma identity makes
    them equal up to rounding.
    """
    eps = _max_spacing(grid)
    if assembly == "restriction":
        mat = kipriyanov_trunc_left_matrix(grid, alpha, eps)
    elif assembly == "direct":
        wp = grid.n - 1
        moment_sum = sum(
            math.factorial(i) / gamma(2.0 - alpha + i) for i in range(0, grid.n - 1)
        )
        zero_order = c_n_alpha(grid.n, alpha) - alpha * moment_sum

        def block(nodes, h):
            b = (alpha / gamma(1.0 - alpha)) * frac1d.psi_block(
                nodes, h, alpha, eps, weight_pow=wp
            )
            b[np.diag_indices_from(b)] += zero_order * nodes ** (-alpha)
            return b

        mat = _per_ray_matrix(grid, block, tag="")
    else:
        raise ValueError(f"assembly must be 'restriction' or 'direct', got {assembly!r}")
    mat.tag = f"D_formal(alpha={alpha},{assembly})"
    return mat


def _apply(matrix: OperatorMatrix, grid: RayGrid, f: GridFunction) -> GridFunction:
    if f.grid is not grid:
        raise ValueError("grid function belongs to a different grid")
    return GridFunction(grid, matrix.matvec(f.values))


def dir_integral_left(grid: RayGrid, g: GridFunction, alpha: float) -> GridFunction:
    """Left-side directional fractional integral (with the (t/r)^(n-1) weight)."""
    return _apply(dir_integral_left_matrix(grid, alpha), grid, g)


def dir_integral_right(grid: RayGrid, g: GridFunction, alpha: float) -> GridFunction:
    """Right-side directional fractional integral (no radial weight)."""
    return _apply(dir_integral_right_matrix(grid, alpha), grid, g)


def psi_plus(grid: RayGrid, f: GridFunction, alpha: float, epsilon: float) -> GridFunction:
    return _apply(psi_plus_matrix(grid, alpha, epsilon), grid, f)


def psi_minus(grid: RayGrid, f: GridFunction, alpha: float, epsilon: float) -> GridFunction:
    return _apply(psi_minus_matrix(grid, alpha, epsilon), grid, f)


def kipriyanov_trunc_left(grid: RayGrid, f: GridFunction, alpha: float,
                          epsilon: float) -> GridFunction:
    return _apply(kipriyanov_trunc_left_matrix(grid, alpha, epsilon), grid, f)


def kipriyanov_trunc_right(grid: RayGrid, f: GridFunction, alpha: float,
                           epsilon: float) -> GridFunction:
    return _apply(kipriyanov_trunc_right_matrix(grid, alpha, epsilon), grid, f)


def kipriyanov_formal(grid: RayGrid, f: GridFunction, alpha: float,
                      assembly: str = "restriction") -> GridFunction:
    """Formal directional derivative of f; warns when f is nonzero at the far boundary.

    The derivative's domain consists of functions vanishing at the outer
    boundary; applying it to anything else is still linear algebra, but the
    result no longer approximates the analytic operator there.
    """
    vals = f.by_ray()
    scale = float(np.max(np.abs(vals))) if vals.size else 0.0
    if scale > 0.0 and float(np.max(np.abs(vals[:, -1]))) > 1e-12 * scale:
        warnings.warn(
            "kipriyanov_formal applied to a function that does not vanish "
            "at the far boundary nodes",
            stacklevel=2,
        )
    return _apply(kipriyanov_formal_matrix(grid, alpha, assembly), grid, f)


def assemble_matrix(grid: RayGrid, operator: Callable, tag: str = "") -> OperatorMatrix:
    """Assemble the dense matrix of a linear operator column by column.

    Column k is the operator applied to the k-th unit grid function.  Rays
    are split into blocks when (and only when) all cross-ray couplings are
    exactly zero.  A deterministic superposition probe rejects operators
    that are not linear.
    """
    m = grid.n_nodes
    cols = []
    unit = np.zeros(m)
    for k in range(m):
        unit[k] = 1.0
        cols.append(operator(GridFunction(grid, unit.copy())).values)
        unit[k] = 0.0
    dense = np.stack(cols, axis=1)
    if np.iscomplexobj(dense) and not np.any(dense.imag):
        dense = dense.real.copy()

    rng = np.random.default_rng(0)
    probe = rng.standard_normal(m)
    direct = operator(GridFunction(grid, probe)).values
    scale = max(float(np.max(np.abs(direct))), 1e-30)
    if float(np.max(np.abs(dense @ probe - direct))) > 1e-12 * scale:
        raise ValueError("operator failed the linear superposition probe; "
                         "only linear operators can be assembled")

    slices = _ray_slices(grid)
    if len(slices) > 1:
        coupled = False
        for a in slices:
            row = dense[a, :]
            if np.any(row[:, : a.start] != 0.0) or np.any(row[:, a.stop:] != 0.0):
                coupled = True
                break
        if not coupled:
            blocks = [dense[s, s].copy() for s in slices]
            return OperatorMatrix(blocks, slices, grid.flat_weights, tag=tag)
    return OperatorMatrix([dense], [slice(0, m)], grid.flat_weights, tag=tag)


def _block_norm_power(blk: np.ndarray, w: np.ndarray, tol: float = 1e-8,
                      maxit: int = 10000) -> float:
    """Largest G-weighted singular value of one block by power iteration.

    Iterates A*A (A* the G-adjoint) from the all-ones vector; the Rayleigh
    quotient converges to the squared norm.
    """
    v = np.ones(blk.shape[0])
    lam_old = -1.0
    for _ in range(maxit):
        y = (blk.T @ (w * (blk @ v))) / w
        denom = float(v @ (w * v))
        lam = float(v @ (w * y)) / denom
        nrm = math.sqrt(max(float(y @ (w * y)), 0.0))
        if nrm == 0.0:
            return 0.0
        v = y / nrm
        if abs(lam - lam_old) <= tol * max(1.0, abs(lam)):
            return math.sqrt(max(lam, 0.0))
        lam_old = lam
    raise PowerIterationError(
        f"operator norm did not converge within {maxit} iterations"
    )


def operator_norm(grid: RayGrid, matrix: OperatorMatrix) -> float:
    """G-weighted operator norm (largest singular value), blockwise power iteration."""
    if matrix.n != grid.n_nodes:
        raise ValueError("matrix does not match the grid")
    return max(
        _block_norm_power(blk, matrix.weights[s])
        for blk, s in zip(matrix.blocks, matrix.slices)
    )


def _block_spectral_norm(blk: np.ndarray) -> float:
    return float(np.linalg.norm(blk, 2))


def _relative_block_norm(diff: OperatorMatrix, ref: OperatorMatrix) -> float:
    num = max(_block_spectral_norm(b) for b in diff.blocks)
    den = max(_block_spectral_norm(b) for b in ref.blocks)
    return num / den


def inversion_residual(grid: RayGrid, phi: GridFunction, alpha: float,
                       side: str = "left") -> float:
    """Relative defect of D_eps(J phi) = phi with eps tied to the spacing."""
    if phi.grid is not grid:
        raise ValueError("grid function belongs to a different grid")
    nrm = phi.norm()
    if nrm == 0.0:
        return 0.0
    eps = _max_spacing(grid)
    if side == "left":
        integ = dir_integral_left_matrix(grid, alpha)
        deriv = kipriyanov_trunc_left_matrix(grid, alpha, eps)
    elif side == "right":
        integ = dir_integral_right_matrix(grid, alpha)
        deriv = kipriyanov_trunc_right_matrix(grid, alpha, eps)
    else:
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    recon = deriv.matvec(integ.matvec(phi.values))
    return GridFunction(grid, recon - phi.values).norm() / nrm


def representability_residual(grid: RayGrid, f: GridFunction, alpha: float) -> float:
    """Relative defect of reconstructing f from its truncated density.

    phi_eps = (1/Gamma(1-alpha)) (f r^-alpha + alpha psi_eps f), which is the
    truncated left derivative of f; the residual is |J_left(phi_eps) - f|/|f|.
    """
    if f.grid is not grid:
        raise ValueError("grid function belongs to a different grid")
    nrm = f.norm()
    if nrm == 0.0:
        return 0.0
    eps = _max_spacing(grid)
    phi = kipriyanov_trunc_left_matrix(grid, alpha, eps).matvec(f.values)
    recon = dir_integral_left_matrix(grid, alpha).matvec(phi)
    return GridFunction(grid, recon - f.values).norm() / nrm


def adjoint_residual(grid: RayGrid, alpha: float, kind: str = "integral") -> float:
    """Relative mismatch between the weighted adjoint of the left operator
    and the independently assembled right operator, |G^-1 A^T G - B| / |B|."""
    if kind == "integral":
        a = dir_integral_left_matrix(grid, alpha)
        b = dir_integral_right_matrix(grid, alpha)
    elif kind == "derivative":
        eps = _max_spacing(grid)
        a = kipriyanov_trunc_left_matrix(grid, alpha, eps)
        b = kipriyanov_trunc_right_matrix(grid, alpha, eps)
    else:
        raise ValueError(f"kind must be 'integral' or 'derivative', got {kind!r}")
    return _relative_block_norm(a.gram_adjoint() - b, b)

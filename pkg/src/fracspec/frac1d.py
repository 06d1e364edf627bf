"""One-dimensional fractional operators on uniform grids.

All multidimensional operators in this package act ray by ray, so the actual
discretizations live here as dense per-ray blocks:

* fractional integral of order alpha: exact product integration of the
  piecewise-linear interpolant against the weakly singular kernel
  (r - t)^(alpha - 1) (the classical L1-type construction).  The radial
  weight (t/r)^(n-1) of the left-side multidimensional operator is attached
  to the integrand before interpolation, so the kernel moments are shared
  between dimensions.
* truncated difference quotient psi_eps: midpoint product integration; every
  node owns the cell between its neighbours' midpoints, clipped to the
  integration window [0, r - eps], and the kernel mass of each cell is
  integrated exactly.
* L1-type fractional derivative: boundary term f(0) r^(-alpha)/Gamma(1-alpha)
  plus product integration of the interpolant slope against (r - t)^(-alpha).
  This converges to the Riemann-Liouville derivative with order >= 1 and is
  the scheme used by the power-function oracle checks.  Note it is distinct
  from the truncated Marchaud operator marchaud_trunc, whose distance to the
  limit derivative is O(eps^(1-alpha)) by construction.

The truncation eps is tied to the spacing h by default: refining the grid
realizes the eps -> 0 limit.
"""

from __future__ import annotations

import numpy as np

from .geometry import GridFunction, RayGrid
from .kernels import gamma

__all__ = [
    "frac_integral_block",
    "psi_block",
    "trunc_derivative_block",
    "l1_derivative_block",
    "rl_integral_left",
    "rl_integral_right",
    "marchaud_trunc",
    "rl_derivative_l1",
    "power_oracle",
]


def _check_uniform_1d(grid: RayGrid):
    if grid.n != 1 or grid.n_dirs != 1:
        raise ValueError("this operator requires a 1-D single-ray grid")


def frac_integral_block(nodes: np.ndarray, h: float, alpha: float,
                        weight_pow: int = 0) -> np.ndarray:
    """Dense block of the left-side fractional integral on one uniform ray.

    Row i approximates (1/Gamma(alpha)) * int_0^{r_i} F(t) (r_i-t)^(alpha-1) dt
    acting on samples g_k, with F = g * t^weight_pow interpolated piecewise
    linearly.  On the leading cell [0, r_0] the interpolant is anchored at
    F(0) = 0 when weight_pow >= 1 (exact) and linearly extrapolated from the
    first two nodes otherwise.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    r = np.asarray(nodes, dtype=float)
    m = r.size
    tb = np.concatenate(([0.0], r))
    big = r[:, None] - tb[None, :-1]
    small = r[:, None] - tb[None, 1:]
    np.maximum(big, 0.0, out=big)
    np.maximum(small, 0.0, out=small)
    p0 = (big**alpha - small**alpha) / alpha
    p1 = r[:, None] * p0 - (big ** (alpha + 1.0) - small ** (alpha + 1.0)) / (alpha + 1.0)

    w = np.zeros((m, m))
    for k in range(1, m):
        left = (tb[k + 1] * p0[:, k] - p1[:, k]) / h
        right = (p1[:, k] - tb[k] * p0[:, k]) / h
        w[:, k - 1] += left
        w[:, k] += right
    if weight_pow >= 1:
        w[:, 0] += p1[:, 0] / r[0]
    else:
        base = p1[:, 0] - r[0] * p0[:, 0]
        w[:, 0] += p0[:, 0] - base / h
        if m > 1:
            w[:, 1] += base / h
        else:
            w[:, 0] += base / h
    if weight_pow:
        w *= (r[None, :] / r[:, None]) ** weight_pow
    return w / gamma(alpha)


def psi_block(nodes: np.ndarray, h: float, alpha: float, eps: float,
              weight_pow: int = 0) -> np.ndarray:
    """Dense block of the truncated left-side difference quotient psi_eps.

    For r_i >= eps, row i approximates
        int_0^{r_i - eps} (F(r_i) - F(t)) / ((r_i - t)^(alpha+1) r_i^wp) dt,
    F = f * t^wp, by exact kernel mass per node cell; for r_i < eps it is the
    closed-form branch (f(r_i)/alpha) (eps^-alpha - r_i^-alpha).
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    r = np.asarray(nodes, dtype=float)
    m = r.size
    if eps < h * (1.0 - 1e-12):
        raise ValueError(f"eps must be at least the spacing h (eps={eps}, h={h})")
    bnd = np.concatenate(([0.0], 0.5 * (r[:-1] + r[1:]), [r[-1] + 0.5 * h]))
    tpow = r**weight_pow
    w = np.zeros((m, m))
    for i in range(m):
        ri = r[i]
        if ri < eps:
            w[i, i] = (eps ** (-alpha) - ri ** (-alpha)) / alpha
            continue
        upper = ri - eps
        a = np.minimum(bnd[:-1], upper)
        b = np.minimum(bnd[1:], upper)
        mass = ((ri - b) ** (-alpha) - (ri - a) ** (-alpha)) / alpha
        w[i, i] += mass.sum()
        w[i, :] -= mass * tpow / (ri**weight_pow)
    return w


def trunc_derivative_block(nodes: np.ndarray, h: float, alpha: float, eps: float,
                           weight_pow: int = 0) -> np.ndarray:
    """Truncated derivative block: diag(r^-alpha)/Gamma(1-alpha) + alpha/Gamma(1-alpha) psi_eps."""
    r = np.asarray(nodes, dtype=float)
    block = alpha * psi_block(nodes, h, alpha, eps, weight_pow)
    block[np.diag_indices_from(block)] += r ** (-alpha)
    return block / gamma(1.0 - alpha)


def l1_derivative_block(nodes: np.ndarray, h: float, alpha: float) -> np.ndarray:
    """L1-type Riemann-Liouville derivative block (boundary term + slope moments)."""
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    r = np.asarray(nodes, dtype=float)
    m = r.size
    tb = np.concatenate(([0.0], r))
    big = r[:, None] - tb[None, :-1]
    small = r[:, None] - tb[None, 1:]
    np.maximum(big, 0.0, out=big)
    np.maximum(small, 0.0, out=small)
    q0 = (big ** (1.0 - alpha) - small ** (1.0 - alpha)) / (1.0 - alpha)
    w = np.zeros((m, m))
    for k in range(1, m):
        w[:, k] += q0[:, k] / h
        w[:, k - 1] -= q0[:, k] / h
    # leading cell reuses the first segment's slope; the boundary value is
    # the matching linear extrapolation f(0) = f_0 - (f_1 - f_0) r_0 / h
    w[:, 1] += q0[:, 0] / h
    w[:, 0] -= q0[:, 0] / h
    rma = r ** (-alpha)
    w[:, 0] += rma * (1.0 + r[0] / h)
    w[:, 1] -= rma * (r[0] / h)
    return w / gamma(1.0 - alpha)


def _flip(block: np.ndarray) -> np.ndarray:
    # both supported node families are symmetric under t -> d - t, so the
    # right-side operator is the left-side one on the mirrored grid
    return block[::-1, ::-1]


def rl_integral_left(f: GridFunction, alpha: float) -> GridFunction:
    """Left-side Riemann-Liouville integral of order alpha on a uniform 1-D grid."""
    grid = f.grid
    _check_uniform_1d(grid)
    block = frac_integral_block(grid.nodes[0], float(grid.spacings[0]), alpha)
    return GridFunction(grid, block @ f.values)


def rl_integral_right(f: GridFunction, alpha: float) -> GridFunction:
    """Right-side Riemann-Liouville integral; the mirror image of the left one."""
    grid = f.grid
    _check_uniform_1d(grid)
    block = _flip(frac_integral_block(grid.nodes[0], float(grid.spacings[0]), alpha))
    return GridFunction(grid, block @ f.values)


def marchaud_trunc(f: GridFunction, alpha: float, epsilon: float,
                   side: str = "left") -> GridFunction:
    """Truncated Marchaud derivative on a uniform 1-D grid.

    Left side: f(r) r^-alpha / Gamma(1-alpha) + (alpha/Gamma(1-alpha)) *
    int_0^{r-eps} (f(r)-f(t)) (r-t)^(-alpha-1) dt, with the closed-form branch
    below r = eps.  Right side is the mirror image over [r, d].
    """
    grid = f.grid
    _check_uniform_1d(grid)
    h = float(grid.spacings[0])
    block = trunc_derivative_block(grid.nodes[0], h, alpha, epsilon)
    if side == "left":
        pass
    elif side == "right":
        block = _flip(block)
    else:
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    return GridFunction(grid, block @ f.values)


def rl_derivative_l1(f: GridFunction, alpha: float, side: str = "left") -> GridFunction:
    """L1-type Riemann-Liouville derivative (the oracle-grade scheme)."""
    grid = f.grid
    _check_uniform_1d(grid)
    block = l1_derivative_block(grid.nodes[0], float(grid.spacings[0]), alpha)
    if side == "right":
        block = _flip(block)
    elif side != "left":
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    return GridFunction(grid, block @ f.values)


def power_oracle(beta: float, alpha: float, mode: str):
    """Closed-form fractional integral / derivative of r^beta.

    integral  : r^beta -> Gamma(beta+1)/Gamma(beta+1+alpha) r^(beta+alpha)
    derivative: r^beta -> Gamma(beta+1)/Gamma(beta+1-alpha) r^(beta-alpha)
    """
    if beta < 0.0:
        raise ValueError(f"beta must be >= 0, got {beta}")
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    if mode == "integral":
        coeff = gamma(beta + 1.0) / gamma(beta + 1.0 + alpha)
        expo = beta + alpha
    elif mode == "derivative":
        if beta <= alpha - 1.0:
            raise ValueError(f"derivative mode needs beta > alpha - 1, got beta={beta}")
        coeff = gamma(beta + 1.0) / gamma(beta + 1.0 - alpha)
        expo = beta - alpha
    else:
        raise ValueError(f"mode must be 'integral' or 'derivative', got {mode!r}")

    def oracle(r):
        return coeff * np.asarray(r, dtype=float) ** expo

    return oracle

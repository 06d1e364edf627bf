"""Eigenvalue solvers, numerical-range sampling and sector verification.

All computations happen in the weighted geometry: reducing an operator
matrix A by the square root of the diagonal Gram matrix, S = D A D^-1 with
D = sqrt(G), turns the G-inner-product problem into a plain Euclidean one,
after which dense LAPACK solvers apply.  Every returned eigenpair is
re-verified against an explicit residual bound, and the numerical-range
boundary is produced by maximizing rotated Hermitian parts over a full
sweep of directions (so that for a Hermitian matrix the samples span the
entire spectral interval).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .directional import OperatorMatrix

__all__ = [
    "SectorConstants",
    "SpectralReport",
    "Verdict",
    "SectorFit",
    "EigenBoundsVerdict",
    "sym_eigs",
    "general_eigs",
    "numerical_range",
    "accretivity_margin",
    "sector_fit",
    "hull_containment_margin",
    "eigen_bounds_check",
]

_RESIDUAL_TOL = 1e-8
_GSYM_TOL = 1e-10


@dataclass(frozen=True)
class SectorConstants:
    """Parametric sector calculator with caller-supplied abstract constants.

    The constants K, delta, eps_young, C2, C3 are carried parametrically
    (the associated estimates never pin them down); the derived vertex and
    half-angle are
        k     = a0 / (eps_young * delta^(2-2nu) * C3 + a1)
        gamma = mu * inf_rho - k * (eps_young * delta^(-2nu) * C2 + 1/eps_young)
        theta = arctan(1/k).
    """

    a0: float
    a1: float
    K: float
    delta: float
    eps_young: float
    C2: float
    C3: float
    nu: float
    mu: float
    inf_rho: float

    def __post_init__(self):
        for name in ("a0", "a1", "K", "delta", "eps_young", "C2", "C3"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be positive")
        if not 0.0 < self.nu < 1.0:
            raise ValueError(f"nu must lie in (0, 1), got {self.nu}")

    @property
    def k(self) -> float:
        return self.a0 / (
            self.eps_young * self.delta ** (2.0 - 2.0 * self.nu) * self.C3 + self.a1
        )

    @property
    def gamma(self) -> float:
        return self.mu * self.inf_rho - self.k * (
            self.eps_young * self.delta ** (-2.0 * self.nu) * self.C2
            + 1.0 / self.eps_young
        )

    @property
    def theta(self) -> float:
        return math.atan(1.0 / self.k)


@dataclass(frozen=True)
class Verdict:
    """One named check outcome; the margin is always recorded."""

    name: str
    passed: bool
    margin: float
    detail: str = ""


@dataclass(frozen=True)
class SectorFit:
    gamma: float
    theta: float
    degenerate: bool = False


@dataclass(frozen=True)
class EigenBoundsVerdict:
    lower_margin: float
    upper_margin: float
    passed: bool


@dataclass
class SpectralReport:
    """Aggregated outcome of the spectral checks on one operator."""

    eigenvalues: np.ndarray
    range_samples: np.ndarray
    accretivity_margin: float
    sector: SectorFit
    verdicts: list = field(default_factory=list)


def _weights(matrix: OperatorMatrix, gram) -> np.ndarray:
    if gram is None:
        return matrix.weights
    gram = np.asarray(gram, dtype=float)
    if gram.shape != (matrix.n,) or not np.allclose(gram, matrix.weights):
        raise ValueError("gram diagonal does not match the matrix weights")
    return gram


def _scaled_blocks(matrix: OperatorMatrix, w: np.ndarray):
    for blk, s in zip(matrix.blocks, matrix.slices):
        d = np.sqrt(w[s])
        yield d[:, None] * blk / d[None, :], s


def sym_eigs(matrix: OperatorMatrix, gram=None) -> np.ndarray:
    """All generalized eigenvalues of a G-symmetric operator, ascending.

    The blockwise square-root-of-Gram reduction produces a plain symmetric
    matrix which is tridiagonalized and diagonalized by LAPACK's implicit
    shift iteration.  Rejects inputs whose G-asymmetry exceeds 1e-10
    (relative Frobenius) and re-verifies every eigenpair residual
    |G(A v - lambda v)| <= 1e-8 |v|.
    """
    w = _weights(matrix, gram)
    vals_all = []
    for s_blk, s in _scaled_blocks(matrix, w):
        scale = float(np.linalg.norm(s_blk))
        asym = float(np.linalg.norm(s_blk - s_blk.T))
        if asym > _GSYM_TOL * max(1.0, scale):
            raise ValueError(
                f"matrix is not G-symmetric: relative asymmetry {asym / max(1.0, scale):.2e}"
            )
        sym = 0.5 * (s_blk + s_blk.T)
        vals, vecs = np.linalg.eigh(sym)
        _check_block_residuals(sym, vals, vecs, w[s])
        vals_all.append(vals)
    return np.sort(np.concatenate(vals_all))


def _check_block_residuals(s_blk, vals, vecs, w):
    # residual in the original variables: |G (A v - lambda v)| / |v| with
    # u = D^-1 y, which equals |D (S - lambda) y| for unit y
    res = s_blk @ vecs - vecs * vals[None, :]
    res = np.sqrt(w)[:, None] * res
    worst = float(np.max(np.linalg.norm(res, axis=0)))
    if worst > _RESIDUAL_TOL:
        raise ArithmeticError(f"eigenpair residual {worst:.2e} exceeds {_RESIDUAL_TOL}")


def general_eigs(matrix: OperatorMatrix, gram=None) -> np.ndarray:
    """Eigenvalues of a general operator matrix, sorted by real part.

    Works on the Gram-reduced real matrix via LAPACK's Hessenberg
    reduction + shifted QR (real Schur form; complex pairs come from the
    2x2 blocks).  Residuals are re-verified as in sym_eigs.
    """
    w = _weights(matrix, gram)
    vals_all = []
    for s_blk, s in _scaled_blocks(matrix, w):
        vals, vecs = scipy.linalg.eig(s_blk)
        _check_block_residuals(s_blk.astype(complex), vals, vecs, w[s])
        vals_all.append(vals)
    vals = np.concatenate(vals_all)
    order = np.lexsort((vals.imag, vals.real))
    return vals[order]


def numerical_range(matrix: OperatorMatrix, gram=None, n_angles: int = 64,
                    seed: int = 42, n_interior: int = 100,
                    return_vectors: bool = False):
    """Boundary and interior samples of the numerical range in the G-metric.

    For each direction angle on a full sweep of the unit circle, the top
    eigenvector v of the Hermitian part of e^{i theta} A yields the boundary
    support point (v, A v)_G / (v, v)_G; a Hermitian matrix therefore gets
    samples spanning its whole spectral interval.  n_interior random unit
    vectors (seeded) add interior Rayleigh quotients.
    """
    if n_angles < 4:
        raise ValueError(f"n_angles must be >= 4, got {n_angles}")
    w = _weights(matrix, gram)
    d = np.sqrt(w)
    s_mat = (d[:, None] * matrix.entries / d[None, :]).astype(complex)
    points = []
    vectors = []
    for m in range(n_angles):
        theta = -math.pi + 2.0 * math.pi * m / n_angles
        rot = np.exp(1j * theta)
        herm = 0.5 * (rot * s_mat + np.conj(rot) * s_mat.conj().T)
        _, vecs = np.linalg.eigh(herm)
        v = vecs[:, -1]
        denom = complex(v.conj() @ v)
        points.append(complex(v.conj() @ (s_mat @ v)) / denom)
        if return_vectors:
            vectors.append(v / d)
    rng = np.random.default_rng(seed)
    for _ in range(n_interior):
        v = rng.standard_normal(matrix.n) + 1j * rng.standard_normal(matrix.n)
        denom = complex(v.conj() @ v)
        points.append(complex(v.conj() @ (s_mat @ v)) / denom)
        if return_vectors:
            vectors.append(v / d)
    pts = np.asarray(points)
    if return_vectors:
        return pts, vectors
    return pts


def accretivity_margin(matrix: OperatorMatrix, gram=None) -> float:
    """Smallest eigenvalue of the G-symmetric part: min Re(u, Au)_G / |u|_G^2."""
    w = _weights(matrix, gram)
    worst = math.inf
    for s_blk, _ in _scaled_blocks(matrix, w):
        sym = 0.5 * (s_blk + s_blk.T)
        worst = min(worst, float(np.linalg.eigvalsh(sym)[0]))
    return worst


def sector_fit(points) -> SectorFit:
    """Tightest wedge with vertex at the leftmost sample containing all samples.

    Samples at the vertex abscissa with nonzero imaginary part force the
    degenerate half-angle pi/2 and are flagged.
    """
    pts = np.asarray(points, dtype=complex)
    if pts.size == 0:
        raise ValueError("sector_fit needs at least one sample")
    re = pts.real
    im = pts.imag
    gamma = float(re.min())
    spread = max(float(re.max()) - gamma, 1.0)
    at_vertex = re - gamma <= 1e-14 * spread
    degenerate = bool(np.any(at_vertex & (np.abs(im) > 1e-14 * spread)))
    theta = math.pi / 2.0 if degenerate else 0.0
    for z in pts[~at_vertex]:
        theta = max(theta, abs(math.atan2(z.imag, z.real - gamma)))
    return SectorFit(gamma=gamma, theta=theta, degenerate=degenerate)


def hull_containment_margin(points, samples, n_angles: int = 256) -> float:
    """Worst violation of points lying in the convex hull of samples.

    The hull is probed through its support function on a fixed sweep of
    directions; the returned value is the largest excess of any point's
    support over the samples' support (<= 0 means all points are inside).
    """
    pts = np.asarray(points, dtype=complex)
    smp = np.asarray(samples, dtype=complex)
    worst = -math.inf
    for m in range(n_angles):
        phase = np.exp(-1j * (2.0 * math.pi * m / n_angles))
        support = float(np.max((phase * smp).real))
        worst = max(worst, float(np.max((phase * pts).real)) - support)
    return worst


def eigen_bounds_check(eigs0, eigs_h, eigs1) -> EigenBoundsVerdict:
    """Two-sided eigenvalue comparison lambda_n(L0) <= lambda_n(H) <= lambda_n(L1).

    Inputs must be ascending lists of equal length (the discrete min-max
    consequence of the form ordering); returns the worst margins.
    """
    e0 = np.asarray(eigs0, dtype=float)
    eh = np.asarray(eigs_h, dtype=float)
    e1 = np.asarray(eigs1, dtype=float)
    if not e0.size == eh.size == e1.size:
        raise ValueError("eigenvalue lists must have equal length")
    for name, e in (("eigs0", e0), ("eigsH", eh), ("eigs1", e1)):
        if np.any(np.diff(e) < 0.0):
            raise ValueError(f"{name} must be sorted ascending")
    lower = float(np.min(eh - e0))
    upper = float(np.min(e1 - eh))
    passed = bool(lower >= -1e-10 and upper >= -1e-10)
    return EigenBoundsVerdict(lower_margin=lower, upper_margin=upper, passed=passed)

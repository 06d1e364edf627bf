"""Directional fractional calculus on convex domains with a boundary pole.

The package discretizes directional fractional integrals and the associated
truncated directional derivatives (Marchaud form in one dimension), builds
second-order elliptic operators with a weighted fractional final term, and
verifies operator-theoretic properties (boundedness, inversion, adjointness,
strict accretivity, sectoriality, two-sided eigenvalue bounds) as
machine-checkable margins.
"""

from .geometry import (
    ConvexDomain,
    GridFunction,
    RayGrid,
    build_interior_grid,
    build_ray_grid,
    disk,
    integrate,
    inner,
    interval,
    ray_length,
    sector,
)
from .kernels import (
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
from .directional import OperatorMatrix, operator_norm
from .spectral import SectorConstants, SpectralReport, Verdict

__version__ = "0.1.0"

"""Convex domains with a boundary pole and the ray grids built over them.

A point Q of the domain is addressed as Q = P + t*e where P is the pole,
e a unit direction and t the distance along the ray.  The volume element
factors as dQ = r^(n-1) dr dchi, which is exactly how grids store their
quadrature weights: one solid-angle weight per direction times r^(n-1)*h
per radial node.

Three domain shapes are supported:

* interval(d)        -- 1-D segment [0, d], pole at 0;
* sector(R, theta)   -- plane circular sector, pole at the vertex, so every
                        admissible direction has ray length R;
* disk(R)            -- plane disk with the pole on the circle; the ray
                        length is the chord 2*R*cos(phi).

Grids are midpoint grids (nodes (i - 1/2)*h) so that no node sits at r = 0,
where the derivative kernels carry an r^(-alpha) factor.  A second, vertex
style 1-D grid (nodes i*h with the endpoints eliminated) is provided for the
elliptic testbed, where Dirichlet conditions make the trapezoid weights exact
for boundary-vanishing functions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

__all__ = [
    "ConvexDomain",
    "interval",
    "sector",
    "disk",
    "direction_in_cone",
    "ray_length",
    "RayGrid",
    "build_ray_grid",
    "build_interior_grid",
    "GridFunction",
    "integrate",
    "inner",
]


@dataclass(frozen=True)
class ConvexDomain:
    """Convex domain with a marked boundary pole at the origin.

    kind    : "interval", "sector" or "disk"
    length  : interval length d (interval only)
    radius  : R (sector and disk)
    angle   : opening angle of the sector, 0 < angle <= pi
    center  : disk center; the pole (origin) must lie on the circle
    """

    kind: str
    length: float | None = None
    radius: float | None = None
    angle: float | None = None
    center: tuple[float, float] | None = None

    def __post_init__(self):
        if self.kind == "interval":
            if self.length is None or self.length <= 0.0:
                raise ValueError(f"interval needs length > 0, got {self.length}")
        elif self.kind == "sector":
            if self.radius is None or self.radius <= 0.0:
                raise ValueError(f"sector needs radius > 0, got {self.radius}")
            if self.angle is None or not 0.0 < self.angle <= math.pi:
                raise ValueError(
                    f"sector angle must lie in (0, pi] for convexity, got {self.angle}"
                )
        elif self.kind == "disk":
            if self.radius is None or self.radius <= 0.0:
                raise ValueError(f"disk needs radius > 0, got {self.radius}")
            if self.center is None:
                raise ValueError("disk needs a center")
            dist = math.hypot(*self.center)
            if abs(dist - self.radius) > 1e-12 * max(1.0, self.radius):
                raise ValueError(
                    "disk pole must lie on the circle: |center| = "
                    f"{dist} != radius {self.radius}"
                )
        else:
            raise ValueError(f"unknown domain kind {self.kind!r}")

    @property
    def dim(self) -> int:
        return 1 if self.kind == "interval" else 2

    @property
    def diam(self) -> float:
        if self.kind == "interval":
            return self.length
        if self.kind == "sector":
            return self.radius * max(1.0, 2.0 * math.sin(self.angle / 2.0))
        return 2.0 * self.radius

    @property
    def volume(self) -> float:
        """Length / area of the domain (the quadrature consistency target)."""
        if self.kind == "interval":
            return self.length
        if self.kind == "sector":
            return 0.5 * self.angle * self.radius**2
        return math.pi * self.radius**2


def interval(length: float) -> ConvexDomain:
    return ConvexDomain(kind="interval", length=length)


def sector(radius: float, angle: float) -> ConvexDomain:
    """Circular sector with vertex pole; directions span chi in [0, angle]."""
    return ConvexDomain(kind="sector", radius=radius, angle=angle)


def disk(radius: float) -> ConvexDomain:
    """Disk with the pole on its boundary; center placed at (radius, 0)."""
    return ConvexDomain(kind="disk", radius=radius, center=(radius, 0.0))


def _as_direction(domain: ConvexDomain, e) -> np.ndarray:
    e = np.atleast_1d(np.asarray(e, dtype=float))
    if e.shape != (domain.dim,):
        raise ValueError(f"direction must have shape ({domain.dim},), got {e.shape}")
    norm = float(np.linalg.norm(e))
    if abs(norm - 1.0) > 1e-9:
        raise ValueError(f"direction must be a unit vector, |e| = {norm}")
    return e


def direction_in_cone(domain: ConvexDomain, e) -> bool:
    """Whether the ray P + t*e enters the domain for small t > 0."""
    e = _as_direction(domain, e)
    if domain.kind == "interval":
        return e[0] > 0.0
    if domain.kind == "sector":
        chi = math.atan2(e[1], e[0])
        return 0.0 <= chi <= domain.angle
    cx, cy = domain.center
    return e[0] * cx + e[1] * cy > 0.0


def ray_length(domain: ConvexDomain, e) -> float:
    """Length of the ray segment from the pole in direction e.

    Directions outside the domain's cone return 0.0 (never negative);
    use direction_in_cone to distinguish that case.
    """
    e = _as_direction(domain, e)
    if not direction_in_cone(domain, e):
        return 0.0
    if domain.kind == "interval":
        return domain.length
    if domain.kind == "sector":
        return domain.radius
    cx, cy = domain.center
    return 2.0 * (e[0] * cx + e[1] * cy)


def _freeze(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class RayGrid:
    """Radial-angular quadrature grid over a convex domain.

    nodes[j, i] is the i-th radial node on ray j, weights[j, i] the measure
    weight dchi_j * r^(n-1) * h_j.  node_offset is 0.5 for midpoint grids
    (nodes (i-1/2)h) and 1.0 for the vertex-style interior grid (nodes i*h).
    Flattened vectors are ray-major: index = j * n_radial + i.
    """

    domain: ConvexDomain
    n: int
    chis: np.ndarray          # direction angles, shape (n_dirs,); [0.0] in 1-D
    dir_weights: np.ndarray   # solid-angle weights dchi_j
    ray_lengths: np.ndarray   # d(e_j)
    spacings: np.ndarray      # h_j
    nodes: np.ndarray         # (n_dirs, n_radial)
    weights: np.ndarray       # (n_dirs, n_radial)
    node_offset: float = 0.5

    def __post_init__(self):
        for name in ("chis", "dir_weights", "ray_lengths", "spacings", "nodes", "weights"):
            _freeze(getattr(self, name))

    @property
    def n_dirs(self) -> int:
        return self.nodes.shape[0]

    @property
    def n_radial(self) -> int:
        return self.nodes.shape[1]

    @property
    def n_nodes(self) -> int:
        return self.nodes.size

    @property
    def flat_weights(self) -> np.ndarray:
        return self.weights.reshape(-1)

    @property
    def flat_radii(self) -> np.ndarray:
        return self.nodes.reshape(-1)

    def directions(self) -> np.ndarray:
        """Unit direction vectors, shape (n_dirs, dim)."""
        if self.n == 1:
            return np.ones((1, 1))
        return np.stack([np.cos(self.chis), np.sin(self.chis)], axis=1)

    def points(self) -> np.ndarray:
        """Cartesian node coordinates, shape (n_nodes, dim)."""
        if self.n == 1:
            return self.nodes.reshape(-1, 1)
        x = self.nodes * np.cos(self.chis)[:, None]
        y = self.nodes * np.sin(self.chis)[:, None]
        return np.stack([x.reshape(-1), y.reshape(-1)], axis=1)


def build_ray_grid(domain: ConvexDomain, n_dirs: int, n_radial: int) -> RayGrid:
    """Midpoint ray grid: directions at angular cell midpoints, radial nodes (i-1/2)h."""
    if n_radial < 8:
        raise ValueError(f"n_radial must be >= 8, got {n_radial}")
    if domain.kind == "interval":
        if n_dirs != 1:
            raise ValueError("interval grids have exactly one direction")
        chis = np.array([0.0])
        dchi = np.array([1.0])
        lengths = np.array([domain.length])
    elif domain.kind == "sector":
        if n_dirs < 1:
            raise ValueError(f"n_dirs must be >= 1, got {n_dirs}")
        step = domain.angle / n_dirs
        chis = (np.arange(n_dirs) + 0.5) * step
        dchi = np.full(n_dirs, step)
        lengths = np.full(n_dirs, domain.radius)
    elif domain.kind == "disk":
        if n_dirs < 1:
            raise ValueError(f"n_dirs must be >= 1, got {n_dirs}")
        # direction cone is the open half-circle around the inward normal;
        # midpoints automatically exclude the two tangential directions
        # where the chord length vanishes
        cx, cy = domain.center
        base = math.atan2(cy, cx)
        step = math.pi / n_dirs
        chis = base - math.pi / 2.0 + (np.arange(n_dirs) + 0.5) * step
        dchi = np.full(n_dirs, step)
        lengths = 2.0 * (np.cos(chis) * cx + np.sin(chis) * cy)
        if np.any(lengths <= 0.0):
            raise ValueError("disk ray grid produced a non-positive chord; "
                             "pole must be a boundary point")
    else:  # pragma: no cover - ConvexDomain already validates
        raise ValueError(f"unknown domain kind {domain.kind!r}")

    h = lengths / n_radial
    idx = np.arange(1, n_radial + 1) - 0.5
    nodes = h[:, None] * idx[None, :]
    weights = dchi[:, None] * nodes ** (domain.dim - 1) * h[:, None]
    return RayGrid(
        domain=domain,
        n=domain.dim,
        chis=chis,
        dir_weights=dchi,
        ray_lengths=lengths,
        spacings=h,
        nodes=nodes,
        weights=weights,
        node_offset=0.5,
    )


def build_interior_grid(domain: ConvexDomain, n_cells: int) -> RayGrid:
    """Vertex-style 1-D grid: nodes i*h, i = 1..n_cells-1, endpoints eliminated.

    Weights are h per node, i.e. the trapezoid rule restricted to functions
    that vanish at both endpoints.  This is the canonical grid of the
    elliptic testbed: the diffusion stencil is the textbook tridiagonal and
    its discrete Dirichlet eigenvectors are exact sine modes.
    """
    if domain.kind != "interval":
        raise ValueError("interior grids are defined for intervals only")
    if n_cells < 4:
        raise ValueError(f"n_cells must be >= 4, got {n_cells}")
    h = domain.length / n_cells
    nodes = (h * np.arange(1, n_cells)).reshape(1, -1)
    weights = np.full_like(nodes, h)
    return RayGrid(
        domain=domain,
        n=1,
        chis=np.array([0.0]),
        dir_weights=np.array([1.0]),
        ray_lengths=np.array([domain.length]),
        spacings=np.array([h]),
        nodes=nodes,
        weights=weights,
        node_offset=1.0,
    )


@dataclass(eq=False)
class GridFunction:
    """Scalar samples (real or complex) on the nodes of a RayGrid."""

    grid: RayGrid
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values)
        if self.values.shape == (self.grid.n_dirs, self.grid.n_radial):
            self.values = self.values.reshape(-1)
        if self.values.shape != (self.grid.n_nodes,):
            raise ValueError(
                f"values must have {self.grid.n_nodes} entries, got shape {self.values.shape}"
            )

    @classmethod
    def from_callable(cls, grid: RayGrid, fn: Callable) -> "GridFunction":
        """Sample fn on the grid; fn takes (r,) in 1-D and (r, chi) in 2-D."""
        if grid.n == 1:
            vals = fn(grid.flat_radii)
        else:
            chi = np.repeat(grid.chis, grid.n_radial)
            vals = fn(grid.flat_radii, chi)
        return cls(grid, np.broadcast_to(np.asarray(vals), (grid.n_nodes,)).copy())

    def norm(self) -> float:
        """Weighted L2 norm sqrt(sum w |f|^2)."""
        return float(np.sqrt(np.sum(self.grid.flat_weights * np.abs(self.values) ** 2)))

    def by_ray(self) -> np.ndarray:
        return self.values.reshape(self.grid.n_dirs, self.grid.n_radial)


def _check_same_grid(grid: RayGrid, f: GridFunction):
    if f.grid is not grid:
        raise ValueError("grid function belongs to a different grid")


def integrate(grid: RayGrid, f: GridFunction):
    """Quadrature sum(w * f); complex if f is complex."""
    _check_same_grid(grid, f)
    total = np.sum(grid.flat_weights * f.values)
    return complex(total) if np.iscomplexobj(f.values) else float(total)


def inner(f: GridFunction, g: GridFunction):
    """Weighted inner product (f, g) = sum w f conj(g)."""
    if f.grid is not g.grid:
        raise ValueError("inner product requires functions on the same grid")
    total = np.sum(f.grid.flat_weights * f.values * np.conj(g.values))
    if np.iscomplexobj(f.values) or np.iscomplexobj(g.values):
        return complex(total)
    return float(total)

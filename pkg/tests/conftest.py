import numpy as np
import pytest

from fracspec.geometry import (
    GridFunction,
    build_interior_grid,
    build_ray_grid,
    disk,
    interval,
    sector,
)

CANON_SECTOR = (1.0, np.pi / 2.0)


@pytest.fixture(scope="session")
def unit_interval_512():
    return build_ray_grid(interval(1.0), 1, 512)


@pytest.fixture(scope="session")
def unit_interval_256():
    return build_ray_grid(interval(1.0), 1, 256)


@pytest.fixture(scope="session")
def sector_128x32():
    return build_ray_grid(sector(*CANON_SECTOR), 32, 128)


@pytest.fixture(scope="session")
def sector_32x8():
    return build_ray_grid(sector(*CANON_SECTOR), 8, 32)


@pytest.fixture(scope="session")
def disk_128x32():
    return build_ray_grid(disk(1.0), 32, 128)


@pytest.fixture(scope="session")
def elliptic_512():
    return build_interior_grid(interval(1.0), 512)


def rel_l2(grid, got, want):
    w = grid.flat_weights
    num = np.sqrt(np.sum(w * np.abs(got - want) ** 2))
    den = np.sqrt(np.sum(w * np.abs(want) ** 2))
    return num / den


def sample(grid, fn):
    return GridFunction.from_callable(grid, fn)

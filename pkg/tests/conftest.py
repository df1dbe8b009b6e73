"""Shared fixtures and reference configurations for the test suite."""

import math

import numpy as np
import pytest

from atiyahdet import Configuration, Point3

SQRT3 = math.sqrt(3.0)
SQRT6 = math.sqrt(6.0)

# Unit-edge equilateral triangle in the u-v plane.
EQUILATERAL3 = (
    (0.0, 0.0, 0.0),
    (0.0, 1.0, 0.0),
    (0.0, 0.5, SQRT3 / 2.0),
)

# Regular tetrahedron with unit edges; first face planar (t = 0).
REG_TETRA = (
    (0.0, 0.0, 0.0),
    (0.0, 1.0, 0.0),
    (0.0, 0.5, SQRT3 / 2.0),
    (SQRT6 / 3.0, 0.5, SQRT3 / 6.0),
)

# Four collinear points at 0, 1, 2, 3: edge lengths (1, 2, 1, 3, 2, 1)
# in the order (r21, r31, r32, r41, r42, r43).
COLLINEAR4 = (
    (0.0, 0.0, 0.0),
    (0.0, 1.0, 0.0),
    (0.0, 2.0, 0.0),
    (0.0, 3.0, 0.0),
)


def make_config(coords):
    return Configuration(tuple(Point3(*c) for c in coords))


def random_points(rng, n, scale=1.0):
    """Well-separated random points; rejects pathological draws."""
    while True:
        pts = rng.normal(size=(n, 3)) * scale
        ok = True
        for i in range(n):
            for j in range(i + 1, n):
                if np.linalg.norm(pts[i] - pts[j]) < 1e-3 * scale:
                    ok = False
        if ok:
            return pts


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture
def equilateral():
    return make_config(EQUILATERAL3)


@pytest.fixture
def regular_tetra():
    return make_config(REG_TETRA)


@pytest.fixture
def collinear4():
    return make_config(COLLINEAR4)

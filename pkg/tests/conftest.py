"""Shared helpers: random shape generation and small fixture polygons."""
import math

import numpy as np
import pytest

from stripnest.geometry import Polygon
from stripnest.poles import attach_poles


def star_polygon(rng, n_verts=8, scale=1.0, min_radius=0.35):
    """A random simple polygon, star-shaped around the origin.

    Sorted angles with positive radii always produce a simple polygon, which
    makes it safe for property tests that need arbitrary valid shapes.
    """
    angles = np.sort(rng.uniform(0.0, 2.0 * math.pi, n_verts))
    # guarantee distinct angles so no edge degenerates
    while np.min(np.diff(angles, append=angles[0] + 2 * math.pi)) < 1e-3:
        angles = np.sort(rng.uniform(0.0, 2.0 * math.pi, n_verts))
    radii = rng.uniform(min_radius, 1.0, n_verts) * scale
    return Polygon(np.c_[radii * np.cos(angles), radii * np.sin(angles)])


@pytest.fixture(scope="session")
def shape_pool():
    """Twelve random shapes with poles attached, shared across tests.

    Session-scoped because pole computation is the expensive part; tests
    must not mutate these.
    """
    rng = np.random.default_rng(20240817)
    return [
        attach_poles(star_polygon(rng, n_verts=rng.integers(4, 12)))
        for _ in range(12)
    ]


@pytest.fixture
def unit_square():
    return Polygon([[0, 0], [1, 0], [1, 1], [0, 1]])


@pytest.fixture
def l_shape():
    # two unit-wide legs of length 2
    return Polygon([[0, 0], [2, 0], [2, 1], [1, 1], [1, 2], [0, 2]])

import math

import numpy as np
import pytest

from digonbound.partition import BoundaryAnchorSet, HeightVector, solve_deltas


@pytest.fixture
def rng():
    return np.random.default_rng(20240711)


def random_anchor_angles(rng, n, min_gap=0.1):
    """Strictly increasing angles in [0, 2pi) with a cyclic gap floor."""
    while True:
        t = np.sort(rng.uniform(0.0, 2.0 * math.pi, n))
        gaps = np.diff(np.concatenate([t, [t[0] + 2.0 * math.pi]]))
        if gaps.min() >= min_gap:
            return tuple(float(x) for x in t)


def random_heights(rng, n, floor=0.05):
    a = rng.dirichlet(np.ones(n))
    a = np.maximum(a, floor)
    a = a / a.sum()
    return tuple(float(x) for x in a)


def random_config(rng, n=None, min_gap=0.1, floor=0.05):
    if n is None:
        n = int(rng.integers(1, 7))
    thetas = random_anchor_angles(rng, n, min_gap)
    alphas = random_heights(rng, n, floor)
    return solve_deltas(BoundaryAnchorSet(thetas), HeightVector(alphas))


def random_interior(rng, rad=0.7):
    r = rad * math.sqrt(rng.uniform())
    t = rng.uniform(0.0, 2.0 * math.pi)
    return r * complex(math.cos(t), math.sin(t))

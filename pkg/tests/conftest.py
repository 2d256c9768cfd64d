import math

import numpy as np
import pytest

from catbell import fock
from catbell.states import Family, StateSpec

SQRT2 = math.sqrt(2.0)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20210907)


def sized_policy(spec: StateSpec, point_radius: float = 1.5, tail_bound: float = 1e-12):
    """Truncation policy covering the state plus displaced test points."""
    amp = (SQRT2 * spec.gamma + SQRT2 * point_radius) * math.exp(abs(spec.s))
    return fock.TruncationPolicy.for_amplitude(amp, tail_bound)


def build_oracle(spec: StateSpec, point_radius: float = 1.5):
    return fock.build_state(spec, sized_policy(spec, point_radius))


def random_points(rng, n, radius=1.2):
    pts = rng.uniform(-radius, radius, size=(n, 2))
    return [complex(x, y) for x, y in pts]


TWO_MODE_FAMILIES = [f for f in Family if f.n_modes == 2]
SINGLE_MODE_FAMILIES = [f for f in Family if f.n_modes == 1]

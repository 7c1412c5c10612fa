import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))  # make oracles importable

from polardem.mosaic import PolarizationStack
from polardem.polar import StokesMaps, stack_from_stokes


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_consistent_stack(rng, shape) -> PolarizationStack:
    """Random per-pixel Stokes states with all orientation values in [0, 1]."""
    s0 = rng.uniform(0.2, 1.8, shape)
    d = rng.uniform(0.0, 1.0, shape) * np.minimum(1.0, 2.0 / s0 - 1.0)
    aop = rng.uniform(-np.pi / 2, np.pi / 2, shape)
    s1 = s0 * d * np.cos(2 * aop)
    s2 = s0 * d * np.sin(2 * aop)
    return stack_from_stokes(StokesMaps(s0, s1, s2))


def constant_stack(shape, s0=1.0, s1=0.0, s2=0.0) -> PolarizationStack:
    full = np.full(shape, float(s0))
    return stack_from_stokes(
        StokesMaps(full, np.full(shape, float(s1)), np.full(shape, float(s2)))
    )

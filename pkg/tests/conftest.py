import itertools
import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from indepkit.funcset import AttributeSet, FunctionSet

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow], derandomize=True
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def cube(n: int) -> np.ndarray:
    return np.array(list(itertools.product((0, 1), repeat=n)), dtype=np.int64).reshape(-1, n)


def subset_set(attrs: AttributeSet, bits: int) -> FunctionSet:
    c = cube(len(attrs))
    return FunctionSet(attrs, c[[j for j in range(len(c)) if bits >> j & 1]], (0, 1))


@pytest.fixture
def rng():
    return np.random.default_rng(20261015)

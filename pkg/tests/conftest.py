"""Shared fixtures for the pycarroll test suite."""

import numpy as np
import pytest

from pycarroll.forms import CarrollBundle
from tests.common import x


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(2024)


@pytest.fixture(params=[1, 2, 3], ids=lambda n: f"n={n}")
def flat_bundle(request) -> CarrollBundle:
    return CarrollBundle.flat(request.param)


@pytest.fixture
def flat3() -> CarrollBundle:
    return CarrollBundle.flat(3)


@pytest.fixture
def twisted2() -> CarrollBundle:
    """Curved n = 2 bundle with a non-flat connection."""
    return CarrollBundle([[1 + x(0) ** 2, 0], [0, 1]], [0, x(0)], name="twisted")

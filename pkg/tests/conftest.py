import numpy as np
import pytest

from dunkl_besov import build_grid

ALPHAS = (-0.25, 0.0, 0.5, 1.5)


@pytest.fixture(scope="session")
def grids():
    """Default-size grids, one per alpha, shared so kernel caches are reused."""
    return {a: build_grid(a, 20.0, 2048) for a in ALPHAS}


@pytest.fixture(scope="session")
def small_grids():
    return {a: build_grid(a, 20.0, 1024) for a in ALPHAS}


@pytest.fixture
def rng():
    return np.random.default_rng(12345)

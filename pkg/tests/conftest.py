import numpy as np
import pytest

from deltanls.grid import default_r_max, make_grid
from deltanls.model import Params


@pytest.fixture(scope="session")
def params_ref() -> Params:
    return Params(alpha=0.0, omega=2.0, omega_tilde=1.0, beta=1.0)


@pytest.fixture(scope="session")
def grid_small():
    """Coarse reference grid, adapted to omega_tilde = 1."""
    return make_grid(default_r_max(1.0), 512, 2.0)


@pytest.fixture(scope="session")
def grid_mid():
    return make_grid(default_r_max(1.0), 1024, 2.0)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(1234)

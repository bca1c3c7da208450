import numpy as np
import pytest

from app.core.qmath import OrthonormalBasis
from app.models.coherence import OptimizerConfig


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture
def ref2():
    return OrthonormalBasis.computational(2)


@pytest.fixture
def ref4():
    return OrthonormalBasis.computational(4)


@pytest.fixture
def cfg():
    return OptimizerConfig()


@pytest.fixture
def coarse_cfg():
    """Cheaper two-qubit search for tests that run many joint optimizations."""
    return OptimizerConfig(grid_points=16, grid_points_two_qubit=6, refine_iters=40)

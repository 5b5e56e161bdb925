import numpy as np
import pytest

from secrecy_regions.channels import make_channel
from secrecy_regions.ensembles import beta_ensemble


def binary_entropy(p: float) -> float:
    if p in (0.0, 1.0):
        return 0.0
    return float(-p * np.log2(p) - (1 - p) * np.log2(1 - p))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def channel():
    return make_channel("amplitude_damping", gamma=0.3)


@pytest.fixture
def entangled_ensemble():
    return beta_ensemble(1.0)


@pytest.fixture
def unassisted_ensemble():
    return beta_ensemble(0.0)


@pytest.fixture
def h2():
    return binary_entropy

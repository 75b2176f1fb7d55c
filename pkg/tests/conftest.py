import numpy as np
import pytest

from ftnsic.chain import FtnConfig

# the three ISI regimes exercised throughout the suite
MILD = dict(p_up=9, q_down=10, alpha=0.3)
MODERATE = dict(p_up=4, q_down=5, alpha=0.5)
SEVERE = dict(p_up=4, q_down=5, alpha=0.4)


@pytest.fixture(scope="session")
def mild_chain() -> FtnConfig:
    return FtnConfig(**MILD)


@pytest.fixture(scope="session")
def moderate_chain() -> FtnConfig:
    return FtnConfig(**MODERATE)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(0xF7A512)

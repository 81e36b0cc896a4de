import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240823)


def make_rng(*entropy) -> np.random.Generator:
    return np.random.default_rng(list(entropy) or 0)

import numpy as np
import pytest

from hermitime.grid import Grid


@pytest.fixture
def periodic_unit():
    return Grid(0.0, 1.0, 64, "periodic")


@pytest.fixture
def closed_wide():
    return Grid(-10.0, 10.0, 401)


@pytest.fixture
def rng():
    return np.random.default_rng(20241017)


def random_values(rng, n):
    return rng.normal(size=n) + 1j * rng.normal(size=n)

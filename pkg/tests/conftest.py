import math

import numpy as np
import pytest

from fuchsian_carleson.beltrami import BeltramiField, BeltramiSpec
from fuchsian_carleson.domain import build_domain
from fuchsian_carleson.group import schottky_from_s

S_TEST = 0.95
AXES = (0.0, math.pi / 2)


@pytest.fixture(scope="session")
def schottky():
    return schottky_from_s(AXES, S_TEST)


@pytest.fixture(scope="session")
def schottky_domain(schottky):
    return build_domain(schottky, 3)


@pytest.fixture(scope="session")
def cyclic():
    # g(0) = 0.9 on the real axis
    return schottky_from_s([0.0], 0.9)


@pytest.fixture(scope="session")
def cyclic_domain(cyclic):
    return build_domain(cyclic, 3)


@pytest.fixture(scope="session")
def field_factory(schottky, schottky_domain):
    def make(spec: BeltramiSpec) -> BeltramiField:
        return BeltramiField(spec, schottky, schottky_domain)

    return make


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)

import logging

import numpy as np
import pytest

from app.code import validate_spec
from app.field import construct_field

logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
)


@pytest.fixture(scope="session")
def fd35():
    return construct_field(3, 5)


@pytest.fixture(scope="session")
def fd37():
    return construct_field(3, 7)


@pytest.fixture(scope="session")
def fd55():
    return construct_field(5, 5)


@pytest.fixture(scope="session")
def fd310():
    return construct_field(3, 10)


@pytest.fixture(scope="session")
def spec351():
    return validate_spec(3, 5, 1)


@pytest.fixture(scope="session")
def spec352():
    return validate_spec(3, 5, 2)


@pytest.fixture(scope="session")
def spec372():
    return validate_spec(3, 7, 2)


@pytest.fixture(scope="session")
def spec551():
    return validate_spec(5, 5, 1)


@pytest.fixture(scope="session")
def spec3102():
    return validate_spec(3, 10, 2, "t3")


@pytest.fixture
def rng():
    return np.random.default_rng(20240501)

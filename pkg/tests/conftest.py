import numpy as np
import pytest

from ramanujan import SieveTable, mobius_range, sigma0_range, totient_range


@pytest.fixture(scope="session")
def table_1e4():
    return SieveTable(10**4)


@pytest.fixture(scope="session")
def table_1e6():
    return SieveTable(10**6)


@pytest.fixture(scope="session")
def phi_1e6(table_1e6):
    return totient_range(table_1e6)


@pytest.fixture(scope="session")
def mu_1e6(table_1e6):
    return mobius_range(table_1e6)


@pytest.fixture(scope="session")
def sigma0_1e6(table_1e6):
    return sigma0_range(table_1e6)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20260809)

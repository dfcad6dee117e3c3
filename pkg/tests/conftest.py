import pytest
from hypothesis import settings

from qcanon.catalog import build

# reproducible CI runs: fixed example streams, no wall-clock flakiness
settings.register_profile("det", derandomize=True, deadline=None)
settings.load_profile("det")


@pytest.fixture(scope="session")
def db12():
    return build(12)


@pytest.fixture(scope="session")
def db14():
    return build(14)


@pytest.fixture(scope="session")
def db16():
    return build(16)


@pytest.fixture(scope="session")
def db20():
    # the large fixture; built once, shared by the scaling/search/sk tests
    return build(20)

import pytest

from magnoghs.params import default_params


@pytest.fixture
def system():
    return default_params()[0]


@pytest.fixture
def geometry():
    return default_params()[1]

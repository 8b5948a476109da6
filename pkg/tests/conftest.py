import pytest

from bohrineq.constants import sharp_constants


@pytest.fixture(scope="session")
def constants():
    return sharp_constants()

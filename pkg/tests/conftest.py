import pytest

from zetacorr import zerodata


@pytest.fixture(scope="session")
def zs():
    """The bundled first 10^4 ordinates."""
    return zerodata.bundled_zeros("1e4")


@pytest.fixture(scope="session")
def zs_large():
    return zerodata.bundled_zeros("1e5")


@pytest.fixture(scope="session")
def small_window(zs):
    return zerodata.window(zs, 300.0)

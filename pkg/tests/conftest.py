import pytest

from niltile.core import build


@pytest.fixture(scope="session")
def c3():
    return build(3)


@pytest.fixture(scope="session")
def c4():
    return build(4)


@pytest.fixture(scope="session")
def c5():
    return build(5)


@pytest.fixture(scope="session")
def c6():
    return build(6)

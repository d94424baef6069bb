import pytest

from dynirr import FieldCtx


@pytest.fixture(scope="session")
def f3():
    return FieldCtx(3)


@pytest.fixture(scope="session")
def f5():
    return FieldCtx(5)


@pytest.fixture(scope="session")
def f7():
    return FieldCtx(7)


@pytest.fixture(scope="session")
def f9():
    return FieldCtx(3, 2)


@pytest.fixture(scope="session")
def f13():
    return FieldCtx(13)

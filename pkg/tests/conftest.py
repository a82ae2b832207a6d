import pytest

from lodua import FPModule, IdealData, make_ring


@pytest.fixture(scope="session")
def ZZ():
    return make_ring({"base": "Z"})


@pytest.fixture(scope="session")
def QQxy():
    return make_ring({"base": "Q", "vars": ["x", "y"]})


@pytest.fixture(scope="session")
def F2xy():
    return make_ring({"base": "Fp", "p": 2, "vars": ["x", "y"]})


@pytest.fixture(scope="session")
def Z5hat():
    return make_ring({"base": "Z", "completion": {"ideal": ["5"], "precision": 20}})


@pytest.fixture(scope="session")
def d5(ZZ):
    return IdealData(ZZ, [5])


@pytest.fixture(scope="session")
def dxy(QQxy):
    return IdealData(QQxy, ["x", "y"])


def zmod(ring, n):
    return FPModule.cyclic(ring, [n])

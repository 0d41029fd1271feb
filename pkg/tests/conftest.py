import pytest

from annotex import fixtures


@pytest.fixture()
def f1():
    return fixtures.build_f1()


@pytest.fixture()
def demo():
    return fixtures.build_demo()

import pytest

from stringnet.shell.formats import builtin_category


@pytest.fixture(scope="session")
def vec_z2_doc():
    return builtin_category("vec-z2")


@pytest.fixture(scope="session")
def vec_z2(vec_z2_doc):
    return vec_z2_doc.category


@pytest.fixture(scope="session")
def vec_z3():
    return builtin_category("vec-z3").category


@pytest.fixture(scope="session")
def fib():
    return builtin_category("fibonacci").category


@pytest.fixture(scope="session")
def ising():
    return builtin_category("ising").category

import pytest

from paratope.e6 import e6_model, e6_lattice, e6_voronoi, aut_group


@pytest.fixture(scope="session")
def model():
    return e6_model()


@pytest.fixture(scope="session")
def e6lat():
    return e6_lattice()


@pytest.fixture(scope="session")
def e6vor():
    return e6_voronoi()


@pytest.fixture(scope="session")
def e6aut(model):
    return aut_group(model)

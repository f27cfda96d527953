import pytest

from zitterdyn.models import constants
from zitterdyn.models.params import electron_separation, make_params
from zitterdyn.solvers.spectrum import DEFAULT_BOX, SearchBox, find_roots


@pytest.fixture(scope="session")
def params():
    return make_params()


@pytest.fixture(scope="session")
def si_params():
    return make_params(d=electron_separation(), unit_mode=constants.SI)


@pytest.fixture(scope="session")
def rest_roots():
    """Certified roots at beta = 0 over the default box."""
    return find_roots(0.0, DEFAULT_BOX)


@pytest.fixture(scope="session")
def growth_roots():
    """Roots at beta = 0 with |Im| <= 10, used by the linearized propagation tests."""
    return find_roots(0.0, SearchBox(0.0, 6.0, -10.0, 10.0))

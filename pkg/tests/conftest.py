import pytest

from porism import NodalArrangement, find_periodic_pair, trace
from porism.poncelet import _origin_on_conic

from fractions import Fraction


@pytest.fixture(scope="session")
def pair4():
    return find_periodic_pair(4)


@pytest.fixture(scope="session")
def pair6():
    return find_periodic_pair(6)


@pytest.fixture(scope="session")
def arr4(pair4):
    return NodalArrangement.from_conic_pair(pair4.c1, pair4.c2)


@pytest.fixture(scope="session")
def arr6(pair6):
    return NodalArrangement.from_conic_pair(pair6.c1, pair6.c2)


@pytest.fixture(scope="session")
def transverse4(pair4):
    origin = _origin_on_conic(pair4.c1, Fraction(3, 25))
    return trace(pair4, origin, 4)


@pytest.fixture(scope="session")
def transverse6(pair6):
    origin = _origin_on_conic(pair6.c1, Fraction(3, 25))
    return trace(pair6, origin, 6)

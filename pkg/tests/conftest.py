from fractions import Fraction as F
from pathlib import Path

import pytest

from ovalmono.curve import DirectionFrame, DomainSpec
from ovalmono.poly import BivariatePoly

FIXTURES = Path(__file__).parent / "fixtures"


def circle_poly() -> BivariatePoly:
    return BivariatePoly([(2, 0, 1), (0, 2, 1), (0, 0, -1)])


def quartic_poly() -> BivariatePoly:
    # dumbbell oval w^2 + (u^2 - 1)^2 = 5/4: two lobes joined by a waist
    return BivariatePoly([(0, 2, 1), (4, 0, 1), (2, 0, -2), (0, 0, F(-1, 4))])


def ellipse_poly() -> BivariatePoly:
    return BivariatePoly([(2, 0, F(1, 4)), (0, 2, 1), (0, 0, -1)])


@pytest.fixture(scope="session")
def circle_domain():
    return DomainSpec(circle_poly(), (F(0), F(0)))


@pytest.fixture(scope="session")
def circle_frame():
    return DirectionFrame(F(1), F(0))


@pytest.fixture(scope="session")
def quartic_domain():
    return DomainSpec(quartic_poly(), (F(1), F(0)))


@pytest.fixture(scope="session")
def quartic_frame():
    # tilted projection: six distinct critical values on the oval
    return DirectionFrame(F(1), F(8))


@pytest.fixture(scope="session")
def ellipse_domain():
    return DomainSpec(ellipse_poly(), (F(0), F(0)))

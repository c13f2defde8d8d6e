import math

import pytest

from focalzones import build_web, orbit_ball, surface_group

INRADIUS = math.acosh(1 + math.sqrt(2))          # 1.528571
CIRCUMRADIUS = math.acosh(3 + 2 * math.sqrt(2))  # 2.448453
FIRST_RING = 2 * INRADIUS                         # 3.057142


@pytest.fixture(scope="session")
def g2():
    return surface_group(2)


@pytest.fixture(scope="session")
def ball31(g2):
    return orbit_ball(g2, 3.1)


@pytest.fixture(scope="session")
def ball8(g2):
    return orbit_ball(g2, 8.0)


@pytest.fixture(scope="session")
def web31(ball31):
    return build_web(ball31)


@pytest.fixture(scope="session")
def web8(ball8):
    return build_web(ball8)

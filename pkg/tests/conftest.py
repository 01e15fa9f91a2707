import math

import numpy as np
import pytest

from carleson import make_circle, make_polygon


@pytest.fixture(scope="session")
def circle():
    return make_circle(1.0, 4096)


@pytest.fixture(scope="session")
def square():
    return make_polygon([(0, 0), (1, 0), (1, 1), (0, 1)], name="square")


@pytest.fixture(scope="session")
def slab():
    """A long thin rectangle; its top edge stands in for a straight line near the origin."""
    return make_polygon([(-5, -1), (5, -1), (5, 0), (-5, 0)], name="slab")


def rot(theta):
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])

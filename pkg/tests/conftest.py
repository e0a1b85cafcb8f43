import math

import mpmath
import pytest

mpmath.mp.dps = 40


def rel_close(a, b, rel, floor=1.0):
    """|a - b| <= rel * max(floor, |b|)."""
    return abs(a - b) <= rel * max(floor, abs(b))


@pytest.fixture(scope="session")
def log_grid():
    """200 points log-spaced on [0.1, 30]."""
    lo, hi = math.log(0.1), math.log(30.0)
    return [math.exp(lo + (hi - lo) * i / 199) for i in range(200)]


def pytest_terminal_summary(terminalreporter):
    from tests import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.RESULTS:
            terminalreporter.write_line(line)

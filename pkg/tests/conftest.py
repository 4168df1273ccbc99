from fractions import Fraction

import pytest

from congruence_forge import expand, parse_spec, specialize

CRANK = "eta(1)^2 * theta(1)^-1"


@pytest.fixture(scope="session")
def crank_500():
    return expand(parse_spec(CRANK), 500)


@pytest.fixture(scope="session")
def crank_60():
    return expand(parse_spec(CRANK), 60)


@pytest.fixture(scope="session")
def partitions_2000():
    return specialize(expand(parse_spec("eta(1)^-1"), 2000))


def beta(k, shift=Fraction(-1, 24)):
    """Engine exponent for combinatorial index ``k``."""
    return Fraction(k) + shift


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)

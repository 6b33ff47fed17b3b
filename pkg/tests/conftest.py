import os
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings

from amoebakit.poly import parse

# every property test replays the same examples
settings.register_profile("pinned", derandomize=True, deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "pinned"))

EX1 = "z1^2*z2 + z1*z2^2 - z1*z2 + {a}"
EX2 = "1 + z1 + z2 + z3 + 3*z1*z2 + 3*z1*z3 + 3*z2*z3 + 11*z1*z2*z3"


def pytest_addoption(parser):
    parser.addoption("--update-golden", action="store_true", default=False,
                     help="rewrite tests/golden from the current CLI output")


@pytest.fixture
def update_golden(request):
    return request.config.getoption("--update-golden")


def example1(a):
    return parse(EX1.format(a=Fraction(a)), ["z1", "z2"])


def example2():
    return parse(EX2, ["z1", "z2", "z3"])


@pytest.fixture
def ex1():
    return example1


@pytest.fixture(scope="session")
def ex2():
    return example2()


# lines printed by the acceptance suite, repeated in the terminal summary
ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

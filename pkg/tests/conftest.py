import pytest
from hypothesis import HealthCheck, settings

from billiard_gaps.exact import parse_alpha

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def sqrt2():
    return parse_alpha("sqrt:2")


@pytest.fixture(scope="session")
def golden2():
    return parse_alpha("golden2")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

from functools import lru_cache

import pytest
from hypothesis import HealthCheck, settings

from lsb2adic.gf import field_for
from lsb2adic.seq import lsb_of

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

# lines recorded by the acceptance suite, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


@lru_cache(maxsize=None)
def ctx(p, n, beta=None):
    return field_for(p, n, beta)


@lru_cache(maxsize=None)
def lsb(p, n, beta=None):
    return lsb_of(ctx(p, n, beta))


@pytest.fixture
def record_criterion():
    def record(line: str):
        ACCEPTANCE_LINES.append(line)
        print(line)
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

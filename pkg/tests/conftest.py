import numpy as np
import pytest

from stabcap.models import Distribution, linear_model

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def uniform11():
    return Distribution("uniform", {"low": -1.0, "high": 1.0})


@pytest.fixture
def doubling(uniform11):
    """x' = 2x + u, x0 ~ U[-1, 1], no noise."""
    return linear_model([[2.0]], init=uniform11)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)

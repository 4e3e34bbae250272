import itertools

import numpy as np
import pytest

ACCEPTANCE_LINES = []


def brute_force_compositions(p, n):
    """All p-tuples of 0..n summing to n, found by exhaustive search."""
    return sorted(c for c in itertools.product(range(n + 1), repeat=p) if sum(c) == n)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

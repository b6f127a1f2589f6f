import functools

import pytest

from ptosc import Discretization, ModelParams, solve_spectrum

ACCEPTANCE_LINES = []


@functools.lru_cache(maxsize=None)
def cached_solve(alpha, c, k=8, N=1500, scheme="fd4", L=None):
    p = ModelParams(alpha, c)
    disc = Discretization.default_for(p, points=N, scheme=scheme, half_width=L)
    return solve_spectrum(p, disc, k)


@pytest.fixture
def solve():
    return cached_solve


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

import math

import numpy as np
import pytest
from hypothesis import settings

from retarded_sl import GridSpec, compute_spectrum, make_problem

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

SHIPPED_Q = "cos(x)"
SHIPPED_DELAY = ("x/2", "(x-pi/2)/2")


def shipped_problem(**coeffs):
    return make_problem(SHIPPED_Q, SHIPPED_DELAY, **coeffs)


def zero_q_problem(**coeffs):
    base = dict(a1=1.0, a1p=0.0, a2=0.0, a2p=1.0, b=math.pi / 2, delta=1.0)
    base.update(coeffs)
    return make_problem("0", "0", **base)


def sup_dist(a, b):
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))


@pytest.fixture(scope="session")
def shipped():
    return shipped_problem()


@pytest.fixture(scope="session")
def zero_q():
    return zero_q_problem()


@pytest.fixture(scope="session")
def shipped_spectrum(shipped):
    return compute_spectrum(shipped, 40, g=GridSpec())


def brute_force_roots(f, lo, hi, step=1e-3):
    """Bisection on every sign change of ``f`` over a uniform grid.

    Grid points where ``f`` is exactly 0 count as roots, twice when ``f``
    keeps its sign across them.
    """
    from scipy.optimize import bisect

    grid = np.arange(round(lo / step), round(hi / step) + 1) * step
    vals = np.asarray(f(grid), dtype=float)
    roots = []
    for i in range(len(grid) - 1):
        if vals[i] * vals[i + 1] < 0:
            roots.append(bisect(lambda m: float(f(m)), grid[i], grid[i + 1], xtol=1e-15, maxiter=200))
    for i in np.flatnonzero(vals == 0):
        roots.append(float(grid[i]))
        if 0 < i < len(grid) - 1 and vals[i - 1] * vals[i + 1] > 0:
            roots.append(float(grid[i]))
    return sorted(roots)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

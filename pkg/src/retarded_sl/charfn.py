"""Characteristic function of the problem and its closed-form companions."""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .dde import GridSpec, end_values, picard_solve
from .problem import Problem

__all__ = [
    "CharacteristicSample",
    "char_fn",
    "char_fn_many",
    "char_fn_picard",
    "char_fn_unperturbed",
    "char_fn_zero_q",
    "tabulate",
]


@dataclass(frozen=True)
class CharacteristicSample:
    mu: float
    f: float
    f0: float


def _combine(p: Problem, mu: float, y_end: float, yp_end: float) -> float:
    return math.cos(p.b) * y_end + mu * math.sin(p.b) * yp_end


def char_fn(p: Problem, mu: float, g: GridSpec = GridSpec()) -> float:
    """``F(mu) = cos(b) y(pi) + mu sin(b) y'(pi)`` from the integrated solution."""
    mu = float(mu)
    return _combine(p, mu, *end_values(p, mu, g))


def char_fn_picard(p: Problem, mu: float, g: GridSpec = GridSpec()) -> float:
    """Same as :func:`char_fn` but from the integral-equation solver (mu != 0)."""
    tr = picard_solve(p, mu, g)
    return _combine(p, float(mu), *tr.end_values)


def default_threads() -> int:
    try:
        return max(1, int(os.environ.get("THREADS", "1")))
    except ValueError:
        return 1


def char_fn_many(p: Problem, mus, g: GridSpec = GridSpec(), threads: int | None = None) -> np.ndarray:
    """Vector of :func:`char_fn` values.

    The integrator releases the GIL, so ``threads > 1`` evaluates chunks
    concurrently.  Results do not depend on the thread count.
    """
    mus = np.asarray(mus, dtype=float)
    threads = default_threads() if threads is None else threads
    if threads <= 1 or mus.size < 2 * threads:
        return np.array([char_fn(p, m, g) for m in mus])
    with ThreadPoolExecutor(threads) as pool:
        return np.fromiter(pool.map(lambda m: char_fn(p, m, g), mus), float, mus.size)


def char_fn_unperturbed(p: Problem, mu):
    """Leading large-``mu`` term ``-(mu^3 a2p / delta) sin(b) sin(mu pi)``."""
    mu = np.asarray(mu, dtype=float)
    out = -(mu**3) * p.a2p / p.delta * math.sin(p.b) * np.sin(mu * math.pi)
    return float(out) if out.ndim == 0 else out


def char_fn_zero_q(p: Problem, mu):
    """Exact characteristic function for ``q = 0``.

    With ``A = mu*a2p + a2`` and ``B = mu*a1p + a1`` the solution is
    ``(A cos(mu x) + B sin(mu x)/mu) / delta`` past the interface, giving::

        F = cos(b)/delta * (A cos(mu pi) + B sin(mu pi)/mu)
            + mu sin(b)/delta * (B cos(mu pi) - mu A sin(mu pi))

    ``sin(mu pi)/mu`` is taken as ``pi * sinc(mu)`` so ``mu = 0`` is regular.
    """
    mu = np.asarray(mu, dtype=float)
    A = mu * p.a2p + p.a2
    B = mu * p.a1p + p.a1
    c, s = np.cos(mu * math.pi), np.sin(mu * math.pi)
    sin_over_mu = math.pi * np.sinc(mu)
    out = (math.cos(p.b) * (A * c + B * sin_over_mu) + mu * math.sin(p.b) * (B * c - mu * A * s)) / p.delta
    return float(out) if out.ndim == 0 else out


def tabulate(p: Problem, mus, g: GridSpec = GridSpec(), threads: int | None = None) -> list[CharacteristicSample]:
    mus = np.asarray(mus, dtype=float)
    f = char_fn_many(p, mus, g, threads)
    f0 = char_fn_unperturbed(p, mus)
    return [CharacteristicSample(float(m), float(a), float(b)) for m, a, b in zip(mus, f, np.atleast_1d(f0))]

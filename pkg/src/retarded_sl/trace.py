"""Truncated regularized trace sums and their closed-form target.

For a labelled spectrum the partial sums are::

    S_N = mu_{-0}^2 + mu_{+0}^2
          + sum_{n=1}^{N} [ mu_{-n}^2 + mu_{+n}^2 - 2 (n-1)^2
                            + (4/pi) (-a1p/a2p + P + Q) ]

and the target value is ``-(2/pi) C - C^2 + D^2`` with
``C = -a1p/a2p + P(0) + Q(0)`` and ``D = a2/a2p + R(0) + S(0)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .asymptotics import _pqrs_argument
from .dde import GridSpec
from .pqrs import DEFAULT_QUAD_POINTS, compute_pqrs
from .problem import Problem
from .spectrum import DEFAULT_SCAN_STEP, IndexedSpectrum, Label, compute_spectrum

__all__ = [
    "TraceReport",
    "trace_constants",
    "trace_term",
    "trace_partial_sum",
    "trace_partial_sums",
    "trace_rhs",
    "trace_report",
]


@dataclass
class TraceReport:
    n_max: int
    partial_sums: np.ndarray  # S_N for N = 2..n_max
    rhs: float
    residuals: np.ndarray
    c_const: float
    d_const: float
    decay_ratios: np.ndarray  # |res(2N)| / |res(N)| for N = 2..n_max//2
    pqrs_at: str = "mu0"
    warnings: list[str] = field(default_factory=list)
    limit_estimate: float | None = None

    def residual_at(self, n: int) -> float:
        return float(self.residuals[n - 2])

    def partial_sum_at(self, n: int) -> float:
        return float(self.partial_sums[n - 2])

    def decay_ratio(self, n: int) -> float:
        """``|res(2n)| / |res(n)|``."""
        return abs(self.residual_at(2 * n)) / abs(self.residual_at(n))


def trace_constants(p: Problem, quad_points: int = DEFAULT_QUAD_POINTS) -> tuple[float, float]:
    """``(C, D)`` evaluated at mu = 0."""
    v = compute_pqrs(p, 0.0, quad_points)
    c = -p.a1p / p.a2p + v.p_val + v.q_val
    d = p.a2 / p.a2p + v.r_val + v.s_val
    return c, d


def trace_rhs(p: Problem, quad_points: int = DEFAULT_QUAD_POINTS) -> float:
    c, d = trace_constants(p, quad_points)
    return -(2.0 / math.pi) * c - c * c + d * d


def trace_term(p: Problem, spec: IndexedSpectrum, n: int, quad_points: int = DEFAULT_QUAD_POINTS,
               at: str = "mu0") -> float:
    if n < 1:
        raise ValueError("trace terms start at n = 1")
    mu_neg = spec.mu(Label(-1, n))
    mu_pos = spec.mu(Label(1, n))
    v = compute_pqrs(p, _pqrs_argument(Label(1, n), at), quad_points)
    correction = (4.0 / math.pi) * (-p.a1p / p.a2p + v.p_val + v.q_val)
    return mu_neg**2 + mu_pos**2 - 2.0 * (n - 1) ** 2 + correction


def _neumaier_cumsum(values) -> list[float]:
    total = 0.0
    comp = 0.0
    out = []
    for x in values:
        t = total + x
        if abs(total) >= abs(x):
            comp += (total - t) + x
        else:
            comp += (x - t) + total
        total = t
        out.append(total + comp)
    return out


def trace_partial_sums(p: Problem, spec: IndexedSpectrum, n_last: int,
                       quad_points: int = DEFAULT_QUAD_POINTS, at: str = "mu0") -> np.ndarray:
    """``S_0, S_1, ..., S_{n_last}`` (``S_0`` is the ``+-0`` contribution)."""
    head = spec.mu(Label(-1, 0)) ** 2 + spec.mu(Label(1, 0)) ** 2
    terms = [head] + [trace_term(p, spec, n, quad_points, at) for n in range(1, n_last + 1)]
    return np.array(_neumaier_cumsum(terms))


def trace_partial_sum(p: Problem, spec: IndexedSpectrum, N: int,
                      quad_points: int = DEFAULT_QUAD_POINTS, at: str = "mu0") -> float:
    return float(trace_partial_sums(p, spec, N, quad_points, at)[N])


def _limit_note(residuals: np.ndarray, n_max: int) -> tuple[float | None, list[str]]:
    """Richardson estimate of the limiting residual under an O(1/N) tail."""
    if n_max < 4:
        return None, []
    r_full = residuals[n_max - 2]
    r_half = residuals[n_max // 2 - 2]
    limit = (n_max * r_full - (n_max // 2) * r_half) / (n_max - n_max // 2)
    tail = abs(r_full - limit)
    notes = []
    if abs(limit) > 10.0 * tail and abs(limit) > 1e-8:
        notes.append(
            f"residual plateau: S_N - rhs tends to {limit:.17g} (not 0); "
            f"remaining O(1/N) part at N={n_max} is {tail:.3e}"
        )
    return float(limit), notes


def build_report(p: Problem, spec: IndexedSpectrum, n_max: int | None = None,
                 quad_points: int = DEFAULT_QUAD_POINTS, at: str = "mu0") -> TraceReport:
    """Assemble a :class:`TraceReport` from an already labelled spectrum."""
    n_max = spec.n_max if n_max is None else n_max
    sums = trace_partial_sums(p, spec, n_max, quad_points, at)[2:]
    c, d = trace_constants(p, quad_points)
    rhs = -(2.0 / math.pi) * c - c * c + d * d
    residuals = sums - rhs
    ratios = np.array([abs(residuals[2 * n - 2]) / abs(residuals[n - 2]) if residuals[n - 2] != 0 else math.nan
                       for n in range(2, n_max // 2 + 1)])
    limit, notes = _limit_note(residuals, n_max)
    return TraceReport(n_max, sums, rhs, residuals, c, d, ratios, at,
                       list(spec.warnings) + notes, limit)


def trace_report(p: Problem, n_max: int, g: GridSpec = GridSpec(), *, scan_step: float = DEFAULT_SCAN_STEP,
                 quad_points: int = DEFAULT_QUAD_POINTS, pqrs_at: str = "mu0", root_tol: float = 1e-12,
                 threads: int | None = None, refine_grid: GridSpec | None = None) -> TraceReport:
    """Scan, label, sum and compare against the closed form."""
    if n_max < 10:
        raise ValueError("trace report needs n_max >= 10")
    spec = compute_spectrum(p, n_max, scan_step, g, root_tol, threads, refine_grid)
    return build_report(p, spec, n_max, quad_points, pqrs_at)

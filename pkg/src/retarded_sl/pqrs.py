"""Oscillatory integrals of the potential against the retardation phase.

    P(mu) = 1/2 int_0^pi q(t) cos(mu delay(t)) dt
    Q(mu) = 1/2 int_0^pi q(t) cos(mu (2t - delay(t))) dt
    R(mu) = 1/2 int_0^pi q(t) sin(mu delay(t)) dt
    S(mu) = 1/2 int_0^pi q(t) sin(mu (2t - delay(t))) dt

Quadrature is composite Gauss-Legendre with 16-point panels, split at pi/2
where ``q`` and ``delay`` may jump.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .problem import HALF_PI, Problem

__all__ = ["PQRSValues", "compute_pqrs", "half_abs_q_integral", "nodes_per_half"]

PANEL_ORDER = 16
DEFAULT_QUAD_POINTS = 2048


@dataclass(frozen=True)
class PQRSValues:
    mu: float
    p_val: float
    q_val: float
    r_val: float
    s_val: float


def nodes_per_half(mu: float, quad_points: int) -> int:
    return max(quad_points, 16 * math.ceil(1 + abs(mu)))


@lru_cache(maxsize=64)
def _rule(n_nodes: int) -> tuple[np.ndarray, np.ndarray]:
    """Composite rule on [0, pi/2] with at least ``n_nodes`` nodes."""
    panels = -(-n_nodes // PANEL_ORDER)
    t, w = np.polynomial.legendre.leggauss(PANEL_ORDER)
    width = HALF_PI / panels
    left = np.arange(panels)[:, None] * width
    x = (left + 0.5 * width * (t + 1.0)).ravel()
    wt = np.tile(0.5 * width * w, panels)
    return x, wt


@lru_cache(maxsize=64)
def _samples(p: Problem, n_nodes: int):
    x, w = _rule(n_nodes)
    xr = x + HALF_PI
    theta = np.concatenate([x, xr])
    q = np.concatenate([p.q.eval_left(x), p.q.eval_right(xr)])
    d = np.concatenate([p.delay.eval_left(x), p.delay.eval_right(xr)])
    return theta, np.concatenate([w, w]), q, d


def compute_pqrs(p: Problem, mu: float, quad_points: int = DEFAULT_QUAD_POINTS) -> PQRSValues:
    if quad_points < 32:
        raise ValueError("quad_points must be >= 32")
    mu = float(mu)
    theta, w, q, d = _samples(p, nodes_per_half(mu, quad_points))
    wq = 0.5 * w * q
    a = mu * d
    b = mu * (2.0 * theta - d)
    return PQRSValues(
        mu,
        float(wq @ np.cos(a)),
        float(wq @ np.cos(b)),
        float(wq @ np.sin(a)),
        float(wq @ np.sin(b)),
    )


def half_abs_q_integral(p: Problem, quad_points: int = DEFAULT_QUAD_POINTS) -> float:
    """``1/2 int_0^pi |q|``, a bound for all four integrals."""
    _, w, q, _ = _samples(p, nodes_per_half(0.0, quad_points))
    return float(0.5 * w @ np.abs(q))

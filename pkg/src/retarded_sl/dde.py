"""Method-of-steps integration of the retarded equation on both half-intervals.

The equation ``y'' = -mu^2 y - q(x) y(x - delay(x))`` is integrated with
classical RK4 on a uniform grid per half.  The retarded value is read from
the already computed history through cubic Hermite interpolation of
``(y, y')``.  Initial data at 0 are ``(mu*a2p + a2, mu*a1p + a1)`` and the
right half starts from the left-half end state divided by ``delta``.

:func:`picard_solve` is an independent check: fixed-point iteration of the
equivalent Volterra integral equations with trapezoid quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.integrate import cumulative_trapezoid

from ._kernels import integrate_half
from .errors import MuZero, NoConvergence, NonFiniteState
from .problem import HALF_PI, Problem

__all__ = ["GridSpec", "Trajectory", "solve_omega", "picard_solve", "initial_state"]

WITHIN_STEP_SWEEPS = 5


@dataclass(frozen=True)
class GridSpec:
    steps_per_half: int = 4096
    picard_max_iter: int = 50
    picard_tol: float = 1e-12

    def __post_init__(self):
        if self.steps_per_half < 16:
            raise ValueError("steps_per_half must be at least 16")
        if not self.picard_tol > 0:
            raise ValueError("picard_tol must be positive")
        if self.picard_max_iter < 1:
            raise ValueError("picard_max_iter must be at least 1")

    @property
    def h(self) -> float:
        return HALF_PI / self.steps_per_half


def _hermite_basis(t):
    t2 = t * t
    t3 = t2 * t
    return np.stack([2 * t3 - 3 * t2 + 1, t3 - 2 * t2 + t, -2 * t3 + 3 * t2, t3 - t2], axis=-1)


def _locate(s, x0, h, n_cells, upto=None):
    """Cell index and local coordinate of abscissas ``s`` on a uniform grid."""
    r = (s - x0) / h
    j = np.clip(np.floor(r).astype(np.int64), 0, n_cells - 1)
    if upto is not None:
        j = np.minimum(j, upto)
    t = np.clip(r - j, 0.0, 1.0)
    return j, t


@dataclass(frozen=True)
class _HalfTable:
    x0: float
    qs: np.ndarray
    cells: np.ndarray
    weights: np.ndarray
    inside: np.ndarray


@lru_cache(maxsize=32)
def _stage_tables(p: Problem, steps: int) -> tuple[_HalfTable, _HalfTable]:
    h = HALF_PI / steps
    n = np.arange(steps)[:, None]
    c = np.arange(3)[None, :]
    tables = []
    for x0, qf, df in (
        (0.0, p.q.eval_left, p.delay.eval_left),
        (HALF_PI, p.q.eval_right, p.delay.eval_right),
    ):
        xs = x0 + n * h + c * (0.5 * h)
        flat = xs.ravel()
        qs = qf(flat).reshape(xs.shape)
        s = flat - df(flat)
        j, t = _locate(s.reshape(xs.shape), x0, h, steps, upto=np.broadcast_to(n, xs.shape))
        w = _hermite_basis(t)
        inside = np.any(j == n, axis=1)
        for arr in (qs, j, w, inside):
            arr.setflags(write=False)
        tables.append(_HalfTable(x0, qs, j, w, inside))
    return tables[0], tables[1]


@dataclass(frozen=True)
class Trajectory:
    """Nodal values of the solution and its first two derivatives.

    ``left_*`` arrays live on ``[0, pi/2]``, ``right_*`` on ``[pi/2, pi]``;
    the shared abscissa pi/2 carries the pre-jump state on the left and the
    post-jump state on the right.
    """

    mu: float
    left_nodes: np.ndarray
    right_nodes: np.ndarray
    y_left: np.ndarray
    yp_left: np.ndarray
    ypp_left: np.ndarray
    y_right: np.ndarray
    yp_right: np.ndarray
    ypp_right: np.ndarray

    @property
    def h(self) -> float:
        return self.left_nodes[1] - self.left_nodes[0]

    @property
    def end_values(self) -> tuple[float, float]:
        """``(y(pi), y'(pi))``."""
        return float(self.y_right[-1]), float(self.yp_right[-1])

    def evaluate(self, x, side: str | None = None):
        """Dense output ``(y, y')`` at ``x``.

        Points below pi/2 use the left half, above it the right half; at
        exactly pi/2 ``side`` ('left' or 'right', default 'right') picks the
        branch.
        """
        x = np.asarray(x, dtype=float)
        use_right = x > HALF_PI if side == "left" else x >= HALF_PI
        y = np.empty_like(x)
        yp = np.empty_like(x)
        for mask, nodes, yy, vv, aa in (
            (~use_right, self.left_nodes, self.y_left, self.yp_left, self.ypp_left),
            (use_right, self.right_nodes, self.y_right, self.yp_right, self.ypp_right),
        ):
            if not np.any(mask):
                continue
            h = nodes[1] - nodes[0]
            j, t = _locate(x[mask], nodes[0], h, len(nodes) - 1)
            w = _hermite_basis(t)
            y[mask] = w[..., 0] * yy[j] + w[..., 1] * h * vv[j] + w[..., 2] * yy[j + 1] + w[..., 3] * h * vv[j + 1]
            yp[mask] = w[..., 0] * vv[j] + w[..., 1] * h * aa[j] + w[..., 2] * vv[j + 1] + w[..., 3] * h * aa[j + 1]
        if y.ndim == 0:
            return float(y), float(yp)
        return y, yp

    def to_rows(self) -> np.ndarray:
        """Stack as ``(x, y, y')`` rows: left half then right half."""
        return np.vstack(
            [
                np.column_stack([self.left_nodes, self.y_left, self.yp_left]),
                np.column_stack([self.right_nodes, self.y_right, self.yp_right]),
            ]
        )


def initial_state(p: Problem, mu: float) -> tuple[float, float]:
    return mu * p.a2p + p.a2, mu * p.a1p + p.a1


def _run_half(mu, y0, v0, table: _HalfTable, g: GridSpec):
    steps = g.steps_per_half
    y = np.empty(steps + 1)
    v = np.empty(steps + 1)
    a = np.empty(steps + 1)
    bad = integrate_half(
        mu, y0, v0, g.h, table.qs, table.cells, table.weights, table.inside,
        y, v, a, WITHIN_STEP_SWEEPS, g.picard_tol,
    )
    if bad >= 0:
        raise NonFiniteState(table.x0 + bad * g.h, mu)
    return y, v, a


def solve_omega(p: Problem, mu: float, g: GridSpec = GridSpec()) -> Trajectory:
    """Integrate the problem for spectral parameter ``mu`` (any real, including 0)."""
    mu = float(mu)
    left, right = _stage_tables(p, g.steps_per_half)
    y0, v0 = initial_state(p, mu)
    yl, vl, al = _run_half(mu, y0, v0, left, g)
    yr, vr, ar = _run_half(mu, yl[-1] / p.delta, vl[-1] / p.delta, right, g)
    nodes = np.arange(g.steps_per_half + 1) * g.h
    return Trajectory(mu, nodes, HALF_PI + nodes, yl, vl, al, yr, vr, ar)


def end_values(p: Problem, mu: float, g: GridSpec = GridSpec()) -> tuple[float, float]:
    """``(y(pi), y'(pi))`` without building a :class:`Trajectory`."""
    mu = float(mu)
    left, right = _stage_tables(p, g.steps_per_half)
    y0, v0 = initial_state(p, mu)
    yl, vl, _ = _run_half(mu, y0, v0, left, g)
    yr, vr, _ = _run_half(mu, yl[-1] / p.delta, vl[-1] / p.delta, right, g)
    return float(yr[-1]), float(vr[-1])


# ---------------------------------------------------------------------------
# integral-equation oracle


def _picard_half(mu, nodes, q, cells, weights, free_y, free_v, g: GridSpec):
    h = nodes[1] - nodes[0]
    u = nodes - nodes[0]
    cos_u, sin_u = np.cos(mu * u), np.sin(mu * u)
    y, v = free_y.copy(), free_v.copy()
    if not np.any(q):
        return y, v
    j = cells
    change = math.inf
    for _ in range(g.picard_max_iter):
        lag = (weights[:, 0] * y[j] + weights[:, 1] * h * v[j]
               + weights[:, 2] * y[j + 1] + weights[:, 3] * h * v[j + 1])
        fl = q * lag
        ic = cumulative_trapezoid(fl * cos_u, dx=h, initial=0.0)
        is_ = cumulative_trapezoid(fl * sin_u, dx=h, initial=0.0)
        y_new = free_y - (sin_u * ic - cos_u * is_) / mu
        v_new = free_v - (cos_u * ic + sin_u * is_)
        scale = max(1.0, np.max(np.abs(y_new)), np.max(np.abs(v_new)))
        change = max(np.max(np.abs(y_new - y)), np.max(np.abs(v_new - v)))
        y, v = y_new, v_new
        if change < g.picard_tol * scale:
            return y, v
    raise NoConvergence(g.picard_max_iter, change)


def picard_solve(p: Problem, mu: float, g: GridSpec = GridSpec()) -> Trajectory:
    """Solve the integral-equation form by fixed-point iteration.

    Left half::

        y(x) = A cos(mu x) + B sin(mu x)/mu
               - (1/mu) int_0^x q(t) sin(mu (x - t)) y(t - delay(t)) dt

    with ``A = mu*a2p + a2``, ``B = mu*a1p + a1``; the right half has the
    same form around pi/2 seeded with the jumped end state.  Integrals use
    the composite trapezoid rule on the grid nodes and retarded values come
    from Hermite interpolation of the current iterate.
    """
    mu = float(mu)
    if mu == 0.0:
        raise MuZero("picard_solve requires mu != 0")
    steps = g.steps_per_half
    h = g.h
    local = np.arange(steps + 1) * h
    out = []
    y0, v0 = initial_state(p, mu)
    for x0, qf, df in (
        (0.0, p.q.eval_left, p.delay.eval_left),
        (HALF_PI, p.q.eval_right, p.delay.eval_right),
    ):
        nodes = x0 + local
        q = qf(nodes)
        j, t = _locate(nodes - df(nodes), x0, h, steps)
        w = _hermite_basis(t)
        cu, su = np.cos(mu * local), np.sin(mu * local)
        free_y = y0 * cu + v0 * su / mu
        free_v = -mu * y0 * su + v0 * cu
        y, v = _picard_half(mu, nodes, q, j, w, free_y, free_v, g)
        a = -mu * mu * y - q * (w[:, 0] * y[j] + w[:, 1] * h * v[j] + w[:, 2] * y[j + 1] + w[:, 3] * h * v[j + 1])
        out.append((nodes, y, v, a))
        y0, v0 = y[-1] / p.delta, v[-1] / p.delta
    (ln, yl, vl, al), (rn, yr, vr, ar) = out
    return Trajectory(mu, ln, rn, yl, vl, al, yr, vr, ar)

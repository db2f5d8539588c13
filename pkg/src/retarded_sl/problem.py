"""Boundary-value problem data and its validation."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .errors import EvalDomainError, ValidationError
from .expr import Expr, eval_expr, parse_expr

HALF_PI = 0.5 * math.pi
DEFAULT_SAMPLES = 1024

# slack for floating-point noise in the sampled delay inequalities
_DELAY_SLACK = 1e-12

COEFFICIENT_KEYS = ("a1", "a1p", "a2", "a2p", "b", "delta")
EXPRESSION_KEYS = ("q_left", "q_right", "delay_left", "delay_right")


class CoefficientWarning(UserWarning):
    """A coefficient is zero where the classical theory assumes it is not."""


@dataclass(frozen=True)
class PiecewiseFn:
    """A function given by one expression on [0, pi/2) and another on (pi/2, pi].

    The one-sided limits at pi/2 are obtained by evaluating each piece there.
    """

    left: Expr
    right: Expr
    left_limit_at_mid: float
    right_limit_at_mid: float
    left_src: str = ""
    right_src: str = ""

    @classmethod
    def from_strings(cls, left: str, right: str | None = None) -> "PiecewiseFn":
        right = left if right is None else right
        le, re_ = parse_expr(left), parse_expr(right)
        try:
            lo = eval_expr(le, HALF_PI)
            hi = eval_expr(re_, HALF_PI)
        except EvalDomainError as exc:
            raise ValidationError(f"one-sided limit at pi/2 is not finite: {exc}") from exc
        return cls(le, re_, lo, hi, left, right)

    def eval_left(self, x):
        return eval_expr(self.left, x)

    def eval_right(self, x):
        return eval_expr(self.right, x)

    def __call__(self, x: float) -> float:
        """Point evaluation; at exactly pi/2 the left limit is returned."""
        return self.eval_left(x) if x <= HALF_PI else self.eval_right(x)


@dataclass(frozen=True)
class Problem:
    """Retarded Sturm-Liouville problem on [0, pi] with an interface at pi/2.

    Attributes
    ----------
    a1, a1p, a2, a2p : float
        Left boundary coefficients; the initial data are
        ``y(0) = mu*a2p + a2`` and ``y'(0) = mu*a1p + a1``.
    b : float
        Angle of the right condition ``cos(b) y(pi) + mu sin(b) y'(pi) = 0``.
    delta : float
        Interface factor; ``y`` and ``y'`` are divided by it across pi/2.
    q, delay : PiecewiseFn
        Potential and retardation.
    """

    a1: float
    a1p: float
    a2: float
    a2p: float
    b: float
    delta: float
    q: PiecewiseFn
    delay: PiecewiseFn
    warnings: tuple[str, ...] = field(default=(), compare=False)

    def with_coefficients(self, **changes) -> "Problem":
        """Copy with some real coefficients replaced (no re-validation of delays)."""
        data = {k: getattr(self, k) for k in COEFFICIENT_KEYS}
        data.update(changes)
        _check_coefficients(data)
        return Problem(q=self.q, delay=self.delay, warnings=self.warnings, **data)


def _check_coefficients(data: Mapping[str, float]) -> list[str]:
    for key in COEFFICIENT_KEYS:
        v = data[key]
        if not isinstance(v, (int, float)) or not math.isfinite(v):
            raise ValidationError(f"{key} must be a finite real number, got {v!r}")
    if data["delta"] == 0:
        raise ValidationError("delta must be nonzero")
    if data["a2p"] == 0:
        raise ValidationError("a2p must be nonzero")
    if abs(math.sin(data["b"])) < 1e-12:
        raise ValidationError("sin(b) must be nonzero")
    return [f"{k} is zero" for k in ("a1", "a1p", "a2") if data[k] == 0]


def _sample_grid(m: int) -> tuple[np.ndarray, np.ndarray]:
    return np.linspace(0.0, HALF_PI, m + 1), np.linspace(HALF_PI, math.pi, m + 1)


def _check_piece(fn_name: str, side: str, expr_eval, xs: np.ndarray) -> np.ndarray:
    try:
        return expr_eval(xs)
    except EvalDomainError:
        for x in xs:
            try:
                expr_eval(np.array([x]))
            except EvalDomainError as exc:
                raise ValidationError(
                    f"{fn_name} ({side} piece) cannot be evaluated at x={float(x)!r}: {exc}"
                ) from exc
        raise


def validate_delay(q: PiecewiseFn, delay: PiecewiseFn, m: int = DEFAULT_SAMPLES) -> None:
    """Sampled check of finiteness and of the retardation constraints.

    On the left piece ``0 <= delay(x) <= x``; on the right piece
    ``0 <= delay(x) <= x - pi/2``.  Both endpoints of each piece are
    sampled (the pi/2 end as the one-sided limit).
    """
    xl, xr = _sample_grid(m)
    _check_piece("q", "left", q.eval_left, xl)
    _check_piece("q", "right", q.eval_right, xr)
    dl = _check_piece("delay", "left", delay.eval_left, xl)
    dr = _check_piece("delay", "right", delay.eval_right, xr)
    for xs, ds, side, floor in ((xl, dl, "left", 0.0), (xr, dr, "right", HALF_PI)):
        bad = np.flatnonzero(ds < -_DELAY_SLACK)
        if bad.size:
            x = xs[bad[0]]
            raise ValidationError(
                f"delay must be nonnegative: delay({float(x)!r}) = {float(ds[bad[0]])!r} ({side} piece)"
            )
        bad = np.flatnonzero(xs - ds < floor - _DELAY_SLACK)
        if bad.size:
            x = xs[bad[0]]
            bound = "0" if floor == 0.0 else "pi/2"
            raise ValidationError(
                f"x - delay(x) must be >= {bound} on the {side} piece; "
                f"violated at x={float(x)!r} where x - delay(x) = {float(x - ds[bad[0]])!r}"
            )


def build_problem(cfg, *, samples: int = DEFAULT_SAMPLES) -> Problem:
    """Assemble a validated :class:`Problem`.

    ``cfg`` is a :class:`~retarded_sl.config.ProblemConfig` or any mapping
    with the six coefficients and the four expression strings
    (``q_left``, ``q_right``, ``delay_left``, ``delay_right``).
    """
    data = getattr(cfg, "problem", cfg)
    missing = [k for k in COEFFICIENT_KEYS + EXPRESSION_KEYS if k not in data]
    if missing:
        raise ValidationError(f"missing problem keys: {', '.join(missing)}")
    coeffs = {k: float(data[k]) for k in COEFFICIENT_KEYS}
    notes = _check_coefficients(coeffs)
    q = PiecewiseFn.from_strings(data["q_left"], data["q_right"])
    delay = PiecewiseFn.from_strings(data["delay_left"], data["delay_right"])
    validate_delay(q, delay, samples)
    for note in notes:
        warnings.warn(note, CoefficientWarning, stacklevel=2)
    return Problem(q=q, delay=delay, warnings=tuple(notes), **coeffs)


def make_problem(
    q: str | tuple[str, str] = "0",
    delay: str | tuple[str, str] = "0",
    *,
    a1: float = 1.0,
    a1p: float = 1.0,
    a2: float = 1.0,
    a2p: float = 1.0,
    b: float = HALF_PI,
    delta: float = 1.0,
    samples: int = DEFAULT_SAMPLES,
) -> Problem:
    """Keyword front end to :func:`build_problem`.

    A single string for ``q`` or ``delay`` is used on both pieces.
    """
    ql, qr = (q, q) if isinstance(q, str) else q
    dl, dr = (delay, delay) if isinstance(delay, str) else delay
    cfg = dict(
        a1=a1, a1p=a1p, a2=a2, a2p=a2p, b=b, delta=delta,
        q_left=ql, q_right=qr, delay_left=dl, delay_right=dr,
    )
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", CoefficientWarning)
        return build_problem(cfg, samples=samples)


def sample_problem(p: Problem, m: int) -> np.ndarray:
    """Tabulate ``(x, q(x), delay(x), x - delay(x))`` on both pieces.

    Returns an array of shape ``(2*m, 4)``: the first ``m`` rows cover
    [0, pi/2] with the left piece, the last ``m`` rows cover [pi/2, pi]
    with the right piece, so pi/2 appears once per one-sided limit.
    """
    if m < 2:
        raise ValueError("m must be at least 2")
    xl = np.linspace(0.0, HALF_PI, m)
    xr = np.linspace(HALF_PI, math.pi, m)
    rows = []
    for xs, qf, df in ((xl, p.q.eval_left, p.delay.eval_left), (xr, p.q.eval_right, p.delay.eval_right)):
        d = df(xs)
        rows.append(np.column_stack([xs, qf(xs), d, xs - d]))
    return np.vstack(rows)

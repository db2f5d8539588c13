"""Two-term eigenvalue asymptotics and their measured remainders."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .pqrs import DEFAULT_QUAD_POINTS, compute_pqrs
from .problem import Problem
from .spectrum import IndexedSpectrum, Label, unperturbed_zero

__all__ = ["AsymptoticRow", "predicted_mu", "asymptotic_report", "scaled_residual_growth"]

PQRS_AT = ("mu0", "n")


@dataclass(frozen=True)
class AsymptoticRow:
    n: Label
    mu_computed: float
    mu_predicted: float
    residual: float
    scaled_residual: float


def _pqrs_argument(lab: Label, at: str) -> float:
    if at == "mu0":
        return unperturbed_zero(lab)
    if at == "n":
        return float(lab.index)
    raise ValueError(f"pqrs_at must be one of {PQRS_AT}, got {at!r}")


def predicted_mu(p: Problem, n, quad_points: int = DEFAULT_QUAD_POINTS, at: str = "mu0") -> float:
    """``mu0 - (-a1p/a2p + P + Q) / (mu0 pi)`` for label ``n`` (``|n| >= 2``).

    ``P`` and ``Q`` are taken at ``mu0`` by default, or at the signed index
    itself with ``at="n"``.
    """
    lab = Label.of(n)
    mu0 = unperturbed_zero(lab)
    if mu0 == 0.0:
        raise IndexError(f"label {lab} has unperturbed zero 0; prediction needs |n| >= 2")
    v = compute_pqrs(p, _pqrs_argument(lab, at), quad_points)
    bracket = -p.a1p / p.a2p + v.p_val + v.q_val
    return mu0 - bracket / (mu0 * math.pi)


def asymptotic_report(p: Problem, spec: IndexedSpectrum, quad_points: int = DEFAULT_QUAD_POINTS,
                      at: str = "mu0") -> list[AsymptoticRow]:
    if spec.n_max < 10:
        raise ValueError("asymptotic report needs a spectrum with n_max >= 10")
    rows = []
    for lab in spec.labels():
        if lab.k < 2:
            continue
        mu = spec.mu(lab)
        pred = predicted_mu(p, lab, quad_points, at)
        res = mu - pred
        rows.append(AsymptoticRow(lab, mu, pred, res, res * lab.k**2))
    return rows


def scaled_residual_growth(rows: list[AsymptoticRow], lo: int = 10, mid: int = 20, hi: int = 40) -> float:
    """``max|scaled| over mid..hi`` divided by ``max|scaled| over lo..mid``.

    A value ``<= 2`` is consistent with an O(1/n^2) remainder.
    """
    def band(a, b):
        vals = [abs(r.scaled_residual) for r in rows if a <= r.n.k <= b]
        if not vals:
            raise ValueError(f"no rows with {a} <= |n| <= {b}")
        return max(vals)

    return band(mid, hi) / band(lo, mid)


def as_array(rows: list[AsymptoticRow]) -> np.ndarray:
    return np.array([[r.n.index, r.mu_computed, r.mu_predicted, r.residual, r.scaled_residual] for r in rows])

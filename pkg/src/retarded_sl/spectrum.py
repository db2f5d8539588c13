"""Real roots of the characteristic function and their two-sided labels.

Labels follow the unperturbed zeros of ``-mu^3 sin(mu pi)``: ``+k`` sits at
``k - 1`` and ``-k`` at ``-(k - 1)`` for ``k >= 1``, ``+0``/``-0`` at 0.  So
four labels (``-1, -0, +0, +1``) share the quadruple zero at the origin
and every other integer carries exactly one label.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable

import numpy as np

from .charfn import char_fn, char_fn_many
from .dde import GridSpec
from .errors import IndexingError, MissingLabel, RetardedSLError
from .problem import Problem

__all__ = [
    "Label",
    "SpectrumEntry",
    "IndexedSpectrum",
    "RootList",
    "unperturbed_zero",
    "refine_bracket",
    "scan_function",
    "scan_roots",
    "index_spectrum",
]

DEFAULT_SCAN_STEP = 0.05
TANGENCY_REL = 1e-6
DOUBLE_ROOT_REL = 1e-10
_SCALE_WINDOW = 20


@dataclass(frozen=True)
class Label:
    """Signed index; ``Label(-1, 0)`` and ``Label(1, 0)`` are distinct."""

    sign: int
    k: int

    def __post_init__(self):
        if self.sign not in (-1, 1) or self.k < 0:
            raise ValueError(f"invalid label ({self.sign}, {self.k})")

    @classmethod
    def of(cls, n: "int | str | Label") -> "Label":
        if isinstance(n, Label):
            return n
        if isinstance(n, str):
            s = n.strip().replace("−", "-")
            sign = -1 if s.startswith("-") else 1
            return cls(sign, int(s.lstrip("+-")))
        return cls(-1 if n < 0 else 1, abs(int(n)))

    @property
    def index(self) -> int:
        return self.sign * self.k

    def sort_key(self) -> tuple[int, int]:
        return (self.sign * self.k, self.sign)

    def __lt__(self, other: "Label") -> bool:
        return self.sort_key() < other.sort_key()

    def __str__(self) -> str:
        return f"{'+' if self.sign > 0 else '-'}{self.k}"

    def __repr__(self) -> str:
        return f"Label({self})"


def all_labels(n_max: int) -> list[Label]:
    """``-n_max .. -1, -0, +0, +1 .. n_max`` in ascending order."""
    neg = [Label(-1, k) for k in range(n_max, -1, -1)]
    pos = [Label(1, k) for k in range(0, n_max + 1)]
    return neg + pos


def unperturbed_zero(n: "int | str | Label") -> float:
    lab = Label.of(n)
    if lab.k == 0:
        return 0.0
    return float(lab.sign * (lab.k - 1))


def _label_for_zero(m: int) -> Label:
    return Label(1 if m > 0 else -1, abs(m) + 1)


@dataclass(frozen=True)
class SpectrumEntry:
    mu: float
    mu0: float
    eps: float


@dataclass
class IndexedSpectrum:
    n_max: int
    entries: dict[Label, SpectrumEntry]
    warnings: list[str] = field(default_factory=list)

    def __getitem__(self, n) -> SpectrumEntry:
        lab = Label.of(n)
        try:
            return self.entries[lab]
        except KeyError:
            raise MissingLabel(f"label {lab} not in spectrum") from None

    def __contains__(self, n) -> bool:
        return Label.of(n) in self.entries

    def mu(self, n) -> float:
        return self[n].mu

    def labels(self) -> list[Label]:
        return sorted(self.entries)

    def sorted_mus(self) -> np.ndarray:
        return np.array([self.entries[lab].mu for lab in self.labels()])


class RootList(list):
    """Sorted roots plus non-fatal diagnostics collected during the scan."""

    def __init__(self, roots: Iterable[float] = (), diagnostics: Iterable[str] = ()):
        super().__init__(roots)
        self.diagnostics = list(diagnostics)


def refine_bracket(f: Callable[[float], float], a: float, b: float, fa: float, fb: float,
                   tol: float = 1e-12, max_iter: int = 200) -> float:
    """Shrink a sign-change bracket to width ``<= tol``.

    Regula falsi with the Illinois modification; a bisection step is forced
    whenever two consecutive steps fail to halve the bracket.
    """
    if fa == 0:
        return a
    if fb == 0:
        return b
    if fa * fb > 0:
        raise ValueError("endpoints do not bracket a sign change")
    if a > b:
        a, b, fa, fb = b, a, fb, fa
    ga, gb = fa, fb  # possibly down-weighted copies used for the secant
    side = 0
    stalls = 0
    for _ in range(max_iter):
        width = b - a
        if width <= tol:
            break
        if stalls >= 2:
            c = 0.5 * (a + b)
            stalls = 0
        else:
            c = b - gb * (b - a) / (gb - ga)
            if not (a < c < b):
                c = 0.5 * (a + b)
        fc = f(c)
        if fc == 0:
            return c
        if (fc > 0) == (fa > 0):
            a, fa, ga = c, fc, fc
            if side == -1:
                gb *= 0.5
            side = -1
        else:
            b, fb, gb = c, fc, fc
            if side == 1:
                ga *= 0.5
            side = 1
        stalls = stalls + 1 if (b - a) > 0.5 * width else 0
    return 0.5 * (a + b) if abs(fa) == abs(fb) else (a if abs(fa) < abs(fb) else b)


def _golden_min_abs(f, a, b, iters=60):
    phi = (math.sqrt(5) - 1) / 2
    c, d = b - phi * (b - a), a + phi * (b - a)
    fc, fd = abs(f(c)), abs(f(d))
    for _ in range(iters):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - phi * (b - a)
            fc = abs(f(c))
        else:
            a, c, fc = c, d, fd
            d = a + phi * (b - a)
            fd = abs(f(d))
    return (c, fc) if fc < fd else (d, fd)


def _scan_grid(lo: float, hi: float, step: float) -> np.ndarray:
    """Grid with spacing ``step`` that contains 0 whenever lo <= 0 <= hi."""
    k_lo = math.floor(lo / step + 1e-9)
    k_hi = math.ceil(hi / step - 1e-9)
    return np.arange(k_lo, k_hi + 1) * step


def _brackets_on(mus, vals):
    """Indices i with a strict sign change between i and i+1."""
    s = np.sign(vals)
    return np.flatnonzero(s[:-1] * s[1:] < 0)


def _refine_rechecked(f, mus, i, tol, notes):
    # the refining function may differ slightly from the scanning one:
    # confirm the bracket with it and widen by one grid cell if needed
    a, b = mus[i], mus[i + 1]
    fa, fb = f(a), f(b)
    if fa * fb > 0:
        step = b - a
        for lo, hi in ((a - step, b), (a, b + step)):
            flo, fhi = f(lo), f(hi)
            if flo * fhi <= 0:
                notes.append(f"bracket near mu={float(a)!r} widened for refinement")
                a, b, fa, fb = lo, hi, flo, fhi
                break
        else:
            raise RetardedSLError(f"lost sign change near mu={float(a)!r} under refinement function")
    return refine_bracket(f, a, b, fa, fb, tol)


def scan_function(f_scalar: Callable[[float], float], f_vector: Callable[[np.ndarray], np.ndarray],
                  lo: float, hi: float, step: float, root_tol: float = 1e-12,
                  recheck: bool = False) -> RootList:
    """Locate the real roots of a function on ``[lo, hi]``.

    Sign changes on the sample grid are refined with :func:`refine_bracket`
    applied to ``f_scalar``; with ``recheck`` the bracket ends are
    re-evaluated first (use when ``f_scalar`` is a more accurate variant
    of ``f_vector``).
    Grid points where ``f`` vanishes exactly are roots; when ``f`` keeps
    its sign across them they are recorded twice as suspected double roots.
    Local minima of ``|f|`` below ``TANGENCY_REL`` times the local scale
    trigger a rescan at ``step/16``; a tangency the rescan cannot split is
    recorded twice if ``|f|`` there is negligible, otherwise only reported.
    """
    mus = _scan_grid(lo, hi, step)
    vals = np.asarray(f_vector(mus), dtype=float)
    roots: list[float] = []
    notes: list[str] = []
    absv = np.abs(vals)
    n = len(mus)

    def local_scale(i):
        return float(np.max(absv[max(0, i - _SCALE_WINDOW): i + _SCALE_WINDOW + 1]))

    for i in _brackets_on(mus, vals):
        if recheck:
            roots.append(_refine_rechecked(f_scalar, mus, i, root_tol, notes))
        else:
            roots.append(refine_bracket(f_scalar, mus[i], mus[i + 1], vals[i], vals[i + 1], root_tol))

    for i in np.flatnonzero(vals == 0):
        roots.append(float(mus[i]))
        if 0 < i < n - 1 and vals[i - 1] * vals[i + 1] > 0:
            roots.append(float(mus[i]))
            notes.append(f"SuspectedDoubleRoot: f vanishes at mu={float(mus[i])!r} without a sign change")

    for i in range(1, n - 1):
        v = absv[i]
        if v == 0 or not (v < absv[i - 1] and v <= absv[i + 1]):
            continue
        if vals[i - 1] * vals[i] <= 0 or vals[i] * vals[i + 1] <= 0:
            continue
        scale = local_scale(i)
        if v > TANGENCY_REL * scale:
            continue
        fine = np.linspace(mus[i - 1], mus[i + 1], 33)[1:-1]
        fvals = np.asarray(f_vector(fine), dtype=float)
        br = _brackets_on(fine, fvals)
        zeros = np.flatnonzero(fvals == 0)
        if br.size or zeros.size:
            for k in br:
                roots.append(refine_bracket(f_scalar, fine[k], fine[k + 1], fvals[k], fvals[k + 1], root_tol))
            roots.extend(float(fine[k]) for k in zeros)
            notes.append(f"near-tangency at mu={float(mus[i])!r} resolved by local rescan")
            continue
        x_min, f_min = _golden_min_abs(f_scalar, mus[i - 1], mus[i + 1])
        if f_min <= DOUBLE_ROOT_REL * scale:
            roots.extend([x_min, x_min])
            notes.append(f"SuspectedDoubleRoot: |f| = {f_min:.3e} at mu={float(x_min)!r} without a sign change")
        else:
            notes.append(f"unresolved near-tangency at mu={float(x_min)!r} (|f| = {f_min:.3e})")
    roots.sort()
    return RootList(roots, notes)


def scan_roots(p: Problem, n_max: int, scan_step: float = DEFAULT_SCAN_STEP, g: GridSpec = GridSpec(),
               root_tol: float = 1e-12, threads: int | None = None,
               refine_grid: GridSpec | None = None) -> RootList:
    """Real roots of the characteristic function on ``|mu| <= n_max - 1/2``.

    ``refine_grid`` optionally refines brackets with a finer integration
    grid than the one used for the scan; the integrator's phase error grows
    like ``mu^5 h^4``, which matters for sums of squared roots at large n.
    """
    if scan_step > 0.1:
        raise ValueError("scan_step must be <= 0.1")
    if n_max < 2:
        raise ValueError("n_max must be >= 2")
    half = (n_max - 1) + 0.5
    fine = g if refine_grid is None else refine_grid
    return scan_function(
        lambda m: char_fn(p, m, fine),
        lambda ms: char_fn_many(p, ms, g, threads),
        -half, half, scan_step, root_tol,
        recheck=refine_grid is not None,
    )


def index_spectrum(roots, n_max: int) -> IndexedSpectrum:
    """Attach labels to sorted roots.

    The four roots of smallest magnitude become ``-1, -0, +0, +1`` (in
    ascending order); every other root goes to the nearest nonzero integer.
    Each label up to ``n_max`` must receive exactly one root.
    """
    roots = [float(r) for r in roots]
    if any(b < a for a, b in zip(roots, roots[1:])):
        raise ValueError("roots must be sorted ascending")
    by_size = sorted(range(len(roots)), key=lambda i: (abs(roots[i]), roots[i]))
    center = sorted(by_size[:4])
    if len(center) < 4:
        missing = [Label(-1, 1), Label(-1, 0), Label(1, 0), Label(1, 1)][len(center)]
        raise IndexingError(str(missing), [roots[i] for i in center])
    buckets: dict[Label, list[float]] = {lab: [] for lab in all_labels(n_max)}
    for lab, i in zip((Label(-1, 1), Label(-1, 0), Label(1, 0), Label(1, 1)), center):
        buckets[lab].append(roots[i])
    rest = set(range(len(roots))) - set(center)
    for i in sorted(rest):
        m = int(np.rint(roots[i]))
        if m == 0:
            m = 1 if roots[i] > 0 else -1
        lab = _label_for_zero(m)
        if lab in buckets:
            buckets[lab].append(roots[i])
    entries = {}
    for lab in all_labels(n_max):
        cands = buckets[lab]
        if len(cands) != 1:
            raise IndexingError(str(lab), cands)
        mu0 = unperturbed_zero(lab)
        entries[lab] = SpectrumEntry(cands[0], mu0, cands[0] - mu0)
    warns = []
    spread = max(abs(roots[i]) for i in center)
    if spread >= 0.5:
        warns.append(f"roots labelled -1..+1 reach |mu| = {spread:.6g}; cluster at 0 is not well separated")
    return IndexedSpectrum(n_max, entries, warns)


def compute_spectrum(p: Problem, n_max: int, scan_step: float = DEFAULT_SCAN_STEP, g: GridSpec = GridSpec(),
                     root_tol: float = 1e-12, threads: int | None = None,
                     refine_grid: GridSpec | None = None) -> IndexedSpectrum:
    """Scan and index in one call; scan diagnostics land in ``warnings``."""
    roots = scan_roots(p, n_max, scan_step, g, root_tol, threads, refine_grid)
    spec = index_spectrum(roots, n_max)
    spec.warnings = list(roots.diagnostics) + spec.warnings
    return spec

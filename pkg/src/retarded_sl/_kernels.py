"""Compiled inner loops for the method-of-steps integrator."""

import numba as nb
import numpy as np


@nb.njit(cache=True, inline="always")
def _lag(n, c, cells, w, y, v, y_end, v_end, h):
    # cubic Hermite value of the history at the retarded point of stage c
    j = cells[n, c]
    if j < n:
        y0, m0, y1, m1 = y[j], v[j], y[j + 1], v[j + 1]
    else:
        # retarded point lies in the step being computed
        y0, m0, y1, m1 = y[n], v[n], y_end, v_end
    return w[n, c, 0] * y0 + w[n, c, 1] * h * m0 + w[n, c, 2] * y1 + w[n, c, 3] * h * m1


@nb.njit(cache=True, nogil=True)
def integrate_half(mu, y0, v0, h, qs, cells, weights, inside, y, v, a, max_sweeps, tol):
    """Classical RK4 for y'' = -mu^2 y - q(x) y(x - delay(x)) on one half.

    ``qs[n, c]``, ``cells[n, c]`` and ``weights[n, c, :]`` describe stage
    abscissa ``x_n + c*h/2`` (c = 0, 1, 2): potential value, history cell
    of the retarded point and its Hermite basis weights.  ``inside[n]``
    flags steps whose retarded points fall in the current cell.

    Fills ``y``, ``v`` (= y') and ``a`` (= y'') at the nodes and returns the
    index of the first non-finite node, or -1.
    """
    n_steps = qs.shape[0]
    mu2 = mu * mu
    y[0] = y0
    v[0] = v0
    hh = 0.5 * h
    h6 = h / 6.0
    f2 = 0.0
    for n in range(n_steps):
        yn = y[n]
        vn = v[n]
        q0 = qs[n, 0]
        q1 = qs[n, 1]
        q2 = qs[n, 2]
        if inside[n]:
            # Taylor predictor; a lag at x_n inside the current cell is y_n
            f0 = q0 * _lag(n, 0, cells, weights, y, v, yn, vn, h)
            an = -mu2 * yn - f0
            y_end = yn + h * vn + 0.5 * h * h * an
            v_end = vn + h * an
            sweeps = max_sweeps
        else:
            y_end = 0.0
            v_end = 0.0
            sweeps = 1
        f0 = 0.0
        f1 = 0.0
        f2 = 0.0
        for _ in range(sweeps):
            if q0 != 0.0:
                f0 = q0 * _lag(n, 0, cells, weights, y, v, y_end, v_end, h)
            if q1 != 0.0:
                f1 = q1 * _lag(n, 1, cells, weights, y, v, y_end, v_end, h)
            if q2 != 0.0:
                f2 = q2 * _lag(n, 2, cells, weights, y, v, y_end, v_end, h)
            k1y = vn
            k1v = -mu2 * yn - f0
            k2y = vn + hh * k1v
            k2v = -mu2 * (yn + hh * k1y) - f1
            k3y = vn + hh * k2v
            k3v = -mu2 * (yn + hh * k2y) - f1
            k4y = vn + h * k3v
            k4v = -mu2 * (yn + h * k3y) - f2
            y_new = yn + h6 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y)
            v_new = vn + h6 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
            change = max(abs(y_new - y_end), abs(v_new - v_end))
            y_end = y_new
            v_end = v_new
            if change < tol * max(1.0, abs(y_new) + abs(v_new)):
                break
        a[n] = -mu2 * yn - f0
        y[n + 1] = y_end
        v[n + 1] = v_end
        if not (np.isfinite(y_end) and np.isfinite(v_end)):
            return n + 1
    # second derivative at the last node from the final stage lag
    a[n_steps] = -mu2 * y[n_steps] - f2
    return -1

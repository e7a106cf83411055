"""Composite Newton-Cotes rules on uniform grids."""

from __future__ import annotations

import numpy as np


def simpson(y, h: float) -> float:
    """Integrate uniformly sampled ``y`` with spacing ``h``.

    Composite Simpson 1/3 over an even number of intervals. With an odd
    interval count the last three intervals use Simpson 3/8 so that the grid
    can be reused without interpolation.
    """
    y = np.asarray(y, dtype=float)
    n = y.size - 1
    if y.ndim != 1 or n < 2:
        raise ValueError("simpson needs a 1-D array with at least 3 samples")
    if n % 2 == 0:
        return float(h / 3.0 * (y[0] + y[-1] + 4.0 * y[1:-1:2].sum() + 2.0 * y[2:-1:2].sum()))
    if n == 3:
        return float(3.0 * h / 8.0 * (y[0] + 3.0 * y[1] + 3.0 * y[2] + y[3]))
    head = simpson(y[:-3], h)
    tail = 3.0 * h / 8.0 * (y[-4] + 3.0 * y[-3] + 3.0 * y[-2] + y[-1])
    return float(head + tail)


def uniform_step(t, rtol: float = 1e-9) -> float:
    """Return the spacing of ``t``; raise if the grid is not uniform."""
    t = np.asarray(t, dtype=float)
    if t.ndim != 1 or t.size < 2:
        raise ValueError("time grid must be 1-D with at least 2 points")
    d = np.diff(t)
    h = (t[-1] - t[0]) / (t.size - 1)
    if h <= 0 or np.max(np.abs(d - h)) > rtol * max(abs(h), abs(t[-1])):
        raise ValueError("time grid is not uniform")
    return h


def time_mean(y, t) -> float:
    """``(1 / (t[-1] - t[0])) * integral of y dt`` on a uniform grid."""
    h = uniform_step(t)
    return simpson(y, h) / (h * (len(t) - 1))

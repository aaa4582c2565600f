"""Feature extraction on sampled curves: extrema, widths, sign changes."""

from __future__ import annotations

import numpy as np


def local_maxima(y) -> np.ndarray:
    """Indices of strict interior local maxima, ignoring NaN neighbourhoods."""
    y = np.asarray(y, dtype=float)
    if y.size < 3:
        return np.array([], dtype=int)
    mid, left, right = y[1:-1], y[:-2], y[2:]
    with np.errstate(invalid="ignore"):
        mask = (mid > left) & (mid > right)
    return np.nonzero(mask)[0] + 1


def local_minima(y) -> np.ndarray:
    return local_maxima(-np.asarray(y, dtype=float))


def count_extrema(y) -> int:
    return int(local_maxima(y).size + local_minima(y).size)


def refine_peak(x, y, i: int) -> float:
    """Vertex of the parabola through samples i-1, i, i+1."""
    x0, x1, x2 = x[i - 1], x[i], x[i + 1]
    y0, y1, y2 = y[i - 1], y[i], y[i + 1]
    den = (x0 - x1) * (x0 - x2) * (x1 - x2)
    a = (x2 * (y1 - y0) + x1 * (y0 - y2) + x0 * (y2 - y1)) / den
    b = (x2 * x2 * (y0 - y1) + x1 * x1 * (y2 - y0) + x0 * x0 * (y1 - y2)) / den
    if a == 0:
        return float(x1)
    return float(-b / (2 * a))


def fwhm(x, y) -> float:
    """Full width at half maximum of |y| around its global extremum.

    Linear interpolation between samples at the half-level crossings of the
    contiguous region containing the peak. Returns the span to the grid edge
    if the curve does not fall below half on that side.
    """
    x = np.asarray(x, dtype=float)
    a = np.abs(np.asarray(y, dtype=float))
    i = int(np.nanargmax(a))
    half = 0.5 * a[i]
    lo = i
    while lo > 0 and a[lo - 1] >= half:
        lo -= 1
    hi = i
    while hi < a.size - 1 and a[hi + 1] >= half:
        hi += 1

    def cross(j_out, j_in):
        t = (half - a[j_out]) / (a[j_in] - a[j_out])
        return x[j_out] + t * (x[j_in] - x[j_out])

    left = cross(lo - 1, lo) if lo > 0 else x[0]
    right = cross(hi + 1, hi) if hi < a.size - 1 else x[-1]
    return float(right - left)


def zero_crossings(x, y) -> np.ndarray:
    """Interpolated abscissae where y changes sign between adjacent samples."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    s = np.sign(y)
    idx = np.nonzero((s[:-1] * s[1:] < 0))[0]
    t = y[idx] / (y[idx] - y[idx + 1])
    return x[idx] + t * (x[idx + 1] - x[idx])


def dominant_transition(x, y) -> float:
    """Sign-change abscissa adjacent to the largest |y| feature.

    Locates the global extremum of |y| and returns the zero crossing closest
    to it; NaN if y never changes sign.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    finite = np.isfinite(y)
    x, y = x[finite], y[finite]
    crossings = zero_crossings(x, y)
    if crossings.size == 0:
        return float("nan")
    peak = x[int(np.argmax(np.abs(y)))]
    return float(crossings[np.argmin(np.abs(crossings - peak))])

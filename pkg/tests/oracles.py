"""Reference computations, written independently of the package's code paths."""
from fractions import Fraction
import math

import numpy as np

MA_COEFF = 2185  # round(2**15 / 15)


def fir_direct(x, width, coeffs=(MA_COEFF,) * 15):
    """Direct-form integer convolution over zero-padded history, floor >> 15."""
    x = np.asarray(x, dtype=np.int64)
    acc = np.convolve(x, np.asarray(coeffs, dtype=np.int64))[: len(x)]
    return np.clip(np.floor_divide(acc, 1 << 15), 0, (1 << width) - 1)


def trapezoid(xs, a, b, c, d):
    xs = np.asarray(xs, dtype=float)
    out = np.zeros_like(xs)
    out[(xs >= b) & (xs <= c)] = 1.0
    if b > a:
        m = (xs > a) & (xs < b)
        out[m] = (xs[m] - a) / (b - a)
    if d > c:
        m = (xs > c) & (xs < d)
        out[m] = (d - xs[m]) / (d - c)
    return out


def centroid_oracle(aggregates, terms, lo=-128, hi=127, points=1 << 16):
    """Floating clipped-centroid on a fine grid; None when nothing is active."""
    xs = np.linspace(lo, hi, points)
    mu = np.zeros(points)
    for (a, b, c, d), level in zip(terms, aggregates):
        mu = np.maximum(mu, np.minimum(trapezoid(xs, a, b, c, d), level / 32768))
    if mu.sum() == 0:
        return None
    return float((xs * mu).sum() / mu.sum())


def pmu_reference(radar, lidar):
    """Frame statistics from their textbook definitions using exact rationals."""
    n = len(radar)
    mad = math.floor(Fraction(sum(abs(r - l) for r, l in zip(radar, lidar)), n))

    def var(xs):
        mean = Fraction(sum(xs), n)
        return math.floor(sum((x - mean) ** 2 for x in xs) / n)

    return mad, var(radar), var(lidar)


def centroid_oracle_batch(aggregates, terms, lo=-128, hi=127, points=1 << 16, chunk=64):
    """Vectorised ``centroid_oracle`` over rows of aggregates; NaN when inactive."""
    xs = np.linspace(lo, hi, points)
    shapes = np.stack([trapezoid(xs, *t) for t in terms])  # (terms, points)
    aggs = np.asarray(aggregates, dtype=float) / 32768
    out = np.empty(len(aggs))
    for s in range(0, len(aggs), chunk):
        lv = aggs[s:s + chunk, :, None]
        mu = np.minimum(shapes[None], lv).max(axis=1)
        area = mu.sum(axis=1)
        with np.errstate(invalid="ignore", divide="ignore"):
            out[s:s + chunk] = np.where(area > 0, (mu * xs).sum(axis=1) / area, np.nan)
    return out

"""Least-squares power-law fits on log-log axes."""

from dataclasses import dataclass
from typing import Sequence

import numpy as np


@dataclass(frozen=True)
class RateFit:
    """Line through (log x, log y): slope, intercept, r^2, and the points."""

    slope: float
    intercept: float
    r_squared: float
    points: tuple[tuple[float, float], ...]


def fit_loglog_slope(points: Sequence[tuple[float, float]]) -> RateFit:
    """Fit log y = slope * log x + intercept; needs >= 3 positive points."""
    if len(points) < 3:
        raise ValueError("need at least 3 points for a rate fit")
    xs = np.array([p[0] for p in points], dtype=float)
    ys = np.array([p[1] for p in points], dtype=float)
    if np.any(xs <= 0) or np.any(ys <= 0):
        raise ValueError("rate fit requires strictly positive data")
    lx, ly = np.log(xs), np.log(ys)
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = ly - (slope * lx + intercept)
    total = ly - ly.mean()
    denom = float(np.dot(total, total))
    r2 = 1.0 if denom == 0.0 else 1.0 - float(np.dot(resid, resid)) / denom
    r2 = min(max(r2, 0.0), 1.0)
    return RateFit(
        slope=float(slope),
        intercept=float(intercept),
        r_squared=r2,
        points=tuple(zip(map(float, lx), map(float, ly))),
    )

"""Reference initial profiles (smooth, boundary-compatible on [-L, L))."""

import numpy as np

from wavesplit.grid import Field, PeriodicGrid, zero_field


def gaussian(grid: PeriodicGrid, amplitude: float = 1.0, width: float = 4.0,
             center: float = 0.0) -> Field:
    """a * exp(-(x - c)^2 / sigma^2)."""
    if width <= 0:
        raise ValueError("width must be positive")
    return Field(grid, amplitude * np.exp(-((grid.x - center) ** 2) / width**2))


def cosine_mode(grid: PeriodicGrid, mode: int, amplitude: float = 1.0,
                phase: float = 0.0) -> Field:
    """a * cos(mode * pi * x / L + phase) - a single resolved mode."""
    xi = mode * np.pi / grid.half_length
    return Field(grid, amplitude * np.cos(xi * grid.x + phase))


PROFILE_SHAPES = ("gaussian", "zero")


def build_profile(grid: PeriodicGrid, shape: str, amplitude: float,
                  width: float, center: float) -> Field:
    if shape == "gaussian":
        return gaussian(grid, amplitude, width, center)
    if shape == "zero":
        return zero_field(grid)
    raise ValueError(f"unknown profile shape {shape!r}")

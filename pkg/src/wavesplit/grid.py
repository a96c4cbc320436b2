"""Uniform periodic grid on [-L, L) and real-valued fields sampled on it."""

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from wavesplit.errors import GridMismatchError


@dataclass(frozen=True)
class PeriodicGrid:
    """Uniform grid of N points on the torus [-L, L); N even, >= 8."""

    half_length: float
    n_points: int

    def __post_init__(self):
        if self.half_length <= 0:
            raise ValueError("half_length must be positive")
        if self.n_points < 8 or self.n_points % 2 != 0:
            raise ValueError("n_points must be an even integer >= 8")

    @property
    def dx(self) -> float:
        return 2.0 * self.half_length / self.n_points

    @cached_property
    def x(self) -> np.ndarray:
        pts = -self.half_length + self.dx * np.arange(self.n_points)
        pts.setflags(write=False)
        return pts

    @cached_property
    def wavenumbers(self) -> np.ndarray:
        """All N wavenumbers pi*k/L in the standard transform ordering."""
        xi = 2.0 * np.pi * np.fft.fftfreq(self.n_points, d=self.dx)
        xi.setflags(write=False)
        return xi

    @cached_property
    def rfft_wavenumbers(self) -> np.ndarray:
        """Nonnegative wavenumbers matching the half-spectrum layout."""
        xi = np.pi / self.half_length * np.arange(self.n_points // 2 + 1)
        xi.setflags(write=False)
        return xi

    @cached_property
    def dealias_mask(self) -> np.ndarray:
        """2/3-rule mask (1 keeps, 0 zeroes) on the half spectrum."""
        idx = np.arange(self.n_points // 2 + 1)
        mask = (idx <= self.n_points // 3).astype(float)
        mask.setflags(write=False)
        return mask

    def reflect_indices(self) -> np.ndarray:
        # sample index map realizing x -> -x on the periodic grid
        n = self.n_points
        return (n - np.arange(n)) % n


@dataclass(frozen=True)
class Field:
    """Real point samples on a PeriodicGrid; immutable value object."""

    grid: PeriodicGrid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        vals = np.array(self.values, dtype=np.float64, copy=True)
        if vals.shape != (self.grid.n_points,):
            raise ValueError(
                f"expected {self.grid.n_points} samples, got shape {vals.shape}"
            )
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    # -- predicates ------------------------------------------------------

    @property
    def is_finite(self) -> bool:
        return bool(np.isfinite(self.values).all())

    def mean(self) -> float:
        return float(self.values.mean())

    def _check_same_grid(self, other: "Field"):
        if self.grid != other.grid:
            raise GridMismatchError(
                f"grids differ: {self.grid} vs {other.grid}"
            )

    # -- arithmetic (pointwise; products are NOT dealiased here) ----------

    def __add__(self, other: "Field") -> "Field":
        self._check_same_grid(other)
        return Field(self.grid, self.values + other.values)

    def __sub__(self, other: "Field") -> "Field":
        self._check_same_grid(other)
        return Field(self.grid, self.values - other.values)

    def __neg__(self) -> "Field":
        return Field(self.grid, -self.values)

    def __mul__(self, other):
        if isinstance(other, Field):
            self._check_same_grid(other)
            return Field(self.grid, self.values * other.values)
        return Field(self.grid, self.values * float(other))

    __rmul__ = __mul__

    def reflected(self) -> "Field":
        """Samples of x -> f(-x); exact on the periodic grid."""
        return Field(self.grid, self.values[self.grid.reflect_indices()])


def zero_field(grid: PeriodicGrid) -> Field:
    return Field(grid, np.zeros(grid.n_points))

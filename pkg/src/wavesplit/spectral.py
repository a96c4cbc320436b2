"""Periodic Fourier machinery.

Transforms, spectral derivatives, the Bessel-potential family
Lambda^s = (1 - Dx^2)^(s/2), the regularizing inverse
(1 - coeff*delta^2*Dx^2)^(-1), discrete Sobolev norms, mean-zero
antiderivatives, and the commutator bracket [Lambda^s, w].

Conventions used everywhere in the package:

* Real fields are stored as point samples; spectra use the half-complex
  layout of ``numpy.fft.rfft``.
* Odd-order derivative multipliers zero the Nyquist mode (its sign is
  ambiguous on an even grid).
* The discrete H^s norm is Parseval-consistent with the trapezoidal L2
  norm on [-L, L): the s=0 case equals sqrt(sum(f^2) * dx) exactly.
* Pointwise products feeding further spectral work are truncated by the
  2/3 rule (``dealiased_product``).
"""

import numpy as np

from wavesplit.errors import BlownUpFieldError, GridMismatchError, NonzeroMeanError
from wavesplit.grid import Field, PeriodicGrid

# |mean| threshold per grid point above which a field is treated as
# genuinely non-mean-zero (antiderivative would be non-periodic)
MEAN_TOL_PER_POINT = 1e-10


# -- raw-array helpers (half-spectrum layout) -------------------------------

def transform(f: Field) -> np.ndarray:
    """Half-complex spectrum of a real field."""
    return np.fft.rfft(f.values)


def inverse_transform(grid: PeriodicGrid, spectrum: np.ndarray) -> Field:
    return Field(grid, np.fft.irfft(spectrum, n=grid.n_points))


def derivative_symbol(grid: PeriodicGrid, order: int) -> np.ndarray:
    """(i*xi)^order on the half spectrum; Nyquist zeroed for odd order."""
    if order < 0:
        raise ValueError("derivative order must be >= 0")
    sym = (1j * grid.rfft_wavenumbers) ** order
    if order % 2 == 1:
        sym[-1] = 0.0
    return sym


def lambda_symbol(grid: PeriodicGrid, s: float) -> np.ndarray:
    return (1.0 + grid.rfft_wavenumbers**2) ** (s / 2.0)


def helmholtz_inverse_symbol(grid: PeriodicGrid, delta: float, coeff: float) -> np.ndarray:
    return 1.0 / (1.0 + coeff * delta**2 * grid.rfft_wavenumbers**2)


def _mode_weights(grid: PeriodicGrid) -> np.ndarray:
    # Hermitian double-count for interior modes of the half spectrum
    w = np.full(grid.n_points // 2 + 1, 2.0)
    w[0] = 1.0
    w[-1] = 1.0
    return w


def sobolev_norm_spectrum(grid: PeriodicGrid, spectrum: np.ndarray, s: float) -> float:
    weights = _mode_weights(grid) * (1.0 + grid.rfft_wavenumbers**2) ** s
    total = np.sum(weights * np.abs(spectrum) ** 2) * grid.dx / grid.n_points
    return float(np.sqrt(total))


# -- Field-level operations --------------------------------------------------

def _require_finite(f: Field):
    if not f.is_finite:
        raise BlownUpFieldError("field contains NaN/Inf samples")


def spectral_derivative(f: Field, order: int) -> Field:
    """order-th derivative via the Fourier multiplier (i*xi)^order."""
    _require_finite(f)
    if order == 0:
        return f
    return inverse_transform(f.grid, derivative_symbol(f.grid, order) * transform(f))


def apply_lambda_s(f: Field, s: float) -> Field:
    """Multiply each mode by (1 + xi^2)^(s/2)."""
    _require_finite(f)
    if s == 0:
        return f
    return inverse_transform(f.grid, lambda_symbol(f.grid, s) * transform(f))


def apply_helmholtz_inverse(f: Field, delta: float, coeff: float = 1.0) -> Field:
    """Multiply each mode by 1/(1 + coeff*delta^2*xi^2)."""
    if delta < 0:
        raise ValueError("delta must be >= 0")
    if coeff <= 0:
        raise ValueError("coeff must be positive")
    return inverse_transform(
        f.grid, helmholtz_inverse_symbol(f.grid, delta, coeff) * transform(f)
    )


def sobolev_norm(f: Field, s: float) -> float:
    _require_finite(f)
    return sobolev_norm_spectrum(f.grid, transform(f), s)


def linf_norm(f: Field) -> float:
    return float(np.max(np.abs(f.values)))


def l2_inner(f: Field, g: Field) -> float:
    """Trapezoidal L2 inner product on [-L, L)."""
    if f.grid != g.grid:
        raise GridMismatchError("inner product across different grids")
    return float(np.dot(f.values, g.values) * f.grid.dx)


def mean_tolerance(grid: PeriodicGrid) -> float:
    return MEAN_TOL_PER_POINT * grid.n_points


def antiderivative(f: Field) -> Field:
    """Unique mean-zero g with g_x = f; requires mean(f) ~ 0."""
    _require_finite(f)
    m = f.mean()
    if abs(m) > mean_tolerance(f.grid):
        raise NonzeroMeanError(
            f"|mean| = {abs(m):.3e} exceeds {mean_tolerance(f.grid):.3e}; "
            "antiderivative would be non-periodic"
        )
    spec = transform(f)
    xi = f.grid.rfft_wavenumbers
    out = np.zeros_like(spec)
    out[1:] = spec[1:] / (1j * xi[1:])
    out[-1] = 0.0  # Nyquist: inverse of the odd-derivative convention
    return inverse_transform(f.grid, out)


def dealias(f: Field) -> Field:
    """Zero the top third of the spectrum (2/3 rule)."""
    return inverse_transform(f.grid, f.grid.dealias_mask * transform(f))


def dealiased_product(f: Field, g: Field) -> Field:
    """Pointwise product truncated by the 2/3 rule."""
    if f.grid != g.grid:
        raise GridMismatchError("product across different grids")
    return inverse_transform(
        f.grid, f.grid.dealias_mask * np.fft.rfft(f.values * g.values)
    )


def commutator_bracket(w: Field, g: Field, s: float) -> Field:
    """[Lambda^s, w] g = Lambda^s(w*g) - w * Lambda^s(g)."""
    if w.grid != g.grid:
        raise GridMismatchError("commutator across different grids")
    _require_finite(w)
    _require_finite(g)
    return apply_lambda_s(w * g, s) - w * apply_lambda_s(g, s)

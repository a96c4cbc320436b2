import numpy as np
import pytest

from wavesplit.grid import Field, PeriodicGrid


@pytest.fixture
def grid_pi():
    """Unit-wavenumber grid: L = pi makes xi integers."""
    return PeriodicGrid(np.pi, 64)


@pytest.fixture
def grid_mid():
    return PeriodicGrid(32.0, 256)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def band_limited(grid: PeriodicGrid, rng, k_band: int = None, decay: float = 1.0,
                 mean_zero: bool = False) -> Field:
    """Random real field supported on modes 1..k_band (plus mean unless
    mean_zero), with gaussian-decayed amplitudes."""
    n = grid.n_points
    if k_band is None:
        k_band = n // 6
    spec = np.zeros(n // 2 + 1, dtype=complex)
    idx = np.arange(1, k_band + 1)
    amps = np.exp(-decay * (idx / k_band) ** 2)
    spec[1:k_band + 1] = amps * (rng.standard_normal(k_band)
                                 + 1j * rng.standard_normal(k_band))
    if not mean_zero:
        spec[0] = rng.standard_normal()
    # normalization keeps values O(1)
    vals = np.fft.irfft(spec, n=n) * (n / max(k_band, 1)) ** 0.5
    return Field(grid, vals)

import numpy as np
import pytest

from wavesplit.ratefit import fit_loglog_slope


def test_exact_power_law():
    fit = fit_loglog_slope([(1.0, 1.0), (2.0, 4.0), (4.0, 16.0)])
    assert fit.slope == pytest.approx(2.0, abs=1e-12)
    assert fit.r_squared == pytest.approx(1.0, abs=1e-12)
    assert len(fit.points) == 3


def test_constant_data_slope_zero():
    fit = fit_loglog_slope([(1.0, 5.0), (3.0, 5.0), (10.0, 5.0)])
    assert fit.slope == pytest.approx(0.0, abs=1e-12)


def test_perturbed_cubic():
    xs = np.array([1.0, 2.0, 4.0, 8.0, 16.0])
    wiggle = 1.0 + 0.01 * np.array([1, -1, 1, -1, 1])
    ys = xs**3 * wiggle
    fit = fit_loglog_slope(list(zip(xs, ys)))
    assert abs(fit.slope - 3.0) < 0.05


def test_requires_three_points():
    with pytest.raises(ValueError):
        fit_loglog_slope([(1.0, 1.0), (2.0, 2.0)])


def test_requires_positive_data():
    with pytest.raises(ValueError):
        fit_loglog_slope([(1.0, 1.0), (2.0, -4.0), (4.0, 16.0)])
    with pytest.raises(ValueError):
        fit_loglog_slope([(0.0, 1.0), (2.0, 4.0), (4.0, 16.0)])

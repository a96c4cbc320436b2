"""The two kernel lanes must agree (the compiled one is optional)."""

import os
import subprocess
import sys

import numpy as np
import pytest

from wavesplit import _speedups_np as np_lane

try:
    from wavesplit import _speedups as cy_lane
except ImportError:
    cy_lane = None

needs_ext = pytest.mark.skipif(cy_lane is None,
                               reason="compiled extension not built")


@pytest.fixture
def arrays(rng):
    n = 257
    c = lambda: (rng.standard_normal(n) + 1j * rng.standard_normal(n))
    r = lambda: rng.standard_normal(n)
    return c, r


@needs_ext
def test_lanes_agree_complex_kernels(arrays):
    c, _ = arrays
    x, y, a, sa, b, sb, d, sd = (c() for _ in range(8))
    assert np.allclose(np_lane.axpy(x, 0.37, y), cy_lane.axpy(x, 0.37, y),
                       rtol=1e-13, atol=1e-14)
    assert np.allclose(np_lane.combine2(a, sa, b, sb),
                       cy_lane.combine2(a, sa, b, sb), rtol=1e-13, atol=1e-14)
    assert np.allclose(np_lane.combine2s(a, sa, b, 1.7),
                       cy_lane.combine2s(a, sa, b, 1.7), rtol=1e-13, atol=1e-14)
    assert np.allclose(np_lane.combine3(a, sa, b, sb, d, sd),
                       cy_lane.combine3(a, sa, b, sb, d, sd),
                       rtol=1e-13, atol=1e-14)
    k1, k2, k3, k4 = c(), c(), c(), c()
    assert np.allclose(np_lane.rk4_combine(x, k1, k2, k3, k4, 0.01),
                       cy_lane.rk4_combine(x, k1, k2, k3, k4, 0.01),
                       rtol=1e-13, atol=1e-14)
    e, e2 = c(), c()
    assert np.allclose(np_lane.ifrk4_combine(x, e2, e, k1, k2, k3, k4, 0.01),
                       cy_lane.ifrk4_combine(x, e2, e, k1, k2, k3, k4, 0.01),
                       rtol=1e-13, atol=1e-14)


@needs_ext
def test_lanes_agree_real_kernels(arrays):
    _, r = arrays
    w, wx, wxx = r(), r(), r()
    sq_np, flux_np = np_lane.quad_products(w, wx, wxx)
    sq_cy, flux_cy = cy_lane.quad_products(w, wx, wxx)
    assert np.array_equal(sq_np, sq_cy)
    assert np.allclose(flux_np, flux_cy, rtol=1e-13, atol=1e-15)


@needs_ext
def test_lanes_preserve_2d_shape(arrays):
    c, _ = arrays
    x = np.stack([c(), c()])
    y = np.stack([c(), c()])
    out = cy_lane.axpy(x, 0.5, y)
    assert out.shape == x.shape
    assert np.allclose(out, np_lane.axpy(x, 0.5, y), rtol=1e-13, atol=1e-14)


def test_env_var_selects_numpy_lane():
    code = "import wavesplit; print(wavesplit.BACKEND)"
    env = dict(os.environ, WAVESPLIT_BACKEND="numpy")
    out = subprocess.run([sys.executable, "-c", code], env=env,
                         capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"


@needs_ext
def test_solutions_agree_across_lanes(tmp_path):
    # one short solve per lane, bitwise-comparable terminal samples
    script = r"""
import numpy as np
from wavesplit.families import ModelFamily
from wavesplit.grid import PeriodicGrid
from wavesplit.params import PhysParams
from wavesplit.profiles import gaussian
from wavesplit.solvers import model_solve
g = PeriodicGrid(16.0, 128)
traj = model_solve(gaussian(g), PhysParams(0.1, 0.2), ModelFamily("CH"), t_end=1.0)
np.save(%r, traj[-1].w.values)
"""
    outs = []
    for lane in ("numpy", "cython"):
        path = str(tmp_path / f"{lane}.npy")
        env = dict(os.environ, WAVESPLIT_BACKEND=lane)
        subprocess.run([sys.executable, "-c", script % path], env=env, check=True)
        outs.append(np.load(path))
    assert np.allclose(outs[0], outs[1], rtol=1e-13, atol=1e-15)

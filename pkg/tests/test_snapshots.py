import json

import numpy as np
import pytest

from wavesplit.families import ModelFamily
from wavesplit.grid import PeriodicGrid
from wavesplit.params import PhysParams
from wavesplit.profiles import gaussian
from wavesplit.snapshots import (
    SnapshotFormatError,
    load_trajectory,
    save_ib_trajectory,
    save_wave_trajectory,
)
from wavesplit.solvers import default_control, ib_solve, model_solve


@pytest.fixture
def wave_traj():
    g = PeriodicGrid(16.0, 64)
    p = PhysParams(0.1, 0.2)
    fam = ModelFamily("CH")
    ctrl = default_control(g, p, 1.0, fam, n_snapshots=4)
    return model_solve(gaussian(g), p, fam, ctrl), ctrl


def test_wave_round_trip(tmp_path, wave_traj):
    traj, ctrl = wave_traj
    path = tmp_path / "chp.snap"
    save_wave_trajectory(path, traj, ctrl)
    loaded, sidecar = load_trajectory(path)
    assert len(loaded) == len(traj)
    assert sidecar["equation"] == "CH+"
    assert sidecar["ctrl"]["dt"] == ctrl.dt
    for a, b in zip(traj, loaded):
        assert np.array_equal(a.w.values, b.w.values)
        assert a.t == b.t
        assert a.params == b.params
        assert a.family == b.family


def test_ib_round_trip(tmp_path):
    g = PeriodicGrid(16.0, 64)
    p = PhysParams(0.1, 0.2)
    ctrl = default_control(g, p, 1.0, n_snapshots=3)
    traj = ib_solve(gaussian(g), gaussian(g, 0.5, 5.0), p, ctrl)
    path = tmp_path / "ib.snap"
    save_ib_trajectory(path, traj, ctrl)
    loaded, sidecar = load_trajectory(path)
    assert sidecar["equation"] == "IB"
    assert sidecar["field_names"] == ["u", "p"]
    for a, b in zip(traj, loaded):
        assert np.array_equal(a.u.values, b.u.values)
        assert np.array_equal(a.p.values, b.p.values)


def test_corrupt_payload_detected(tmp_path, wave_traj):
    traj, ctrl = wave_traj
    path = tmp_path / "chp.snap"
    save_wave_trajectory(path, traj, ctrl)
    blob = bytearray(path.read_bytes())
    blob[100] ^= 0xFF
    path.write_bytes(bytes(blob))
    with pytest.raises(SnapshotFormatError):
        load_trajectory(path)


def test_bad_magic_detected(tmp_path):
    path = tmp_path / "junk.snap"
    path.write_bytes(b"NOPE" + b"\x00" * 64)
    path.with_suffix(".json").write_text("{}")
    with pytest.raises(SnapshotFormatError):
        load_trajectory(path)


def test_record_count_mismatch_detected(tmp_path, wave_traj):
    traj, ctrl = wave_traj
    path = tmp_path / "chp.snap"
    save_wave_trajectory(path, traj, ctrl)
    sidecar_path = path.with_suffix(".json")
    sidecar = json.loads(sidecar_path.read_text())
    sidecar["record_count"] -= 1
    sidecar_path.write_text(json.dumps(sidecar))
    with pytest.raises(SnapshotFormatError):
        load_trajectory(path)

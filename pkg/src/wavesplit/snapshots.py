"""Binary snapshot export/import.

One ``.snap`` file per trajectory: 4-byte magic ``WSNP``, uint32 format
version, then one self-contained record per snapshot

    half_length float64 | n_points uint32 | t float64 |
    n_fields uint32 | n_fields * n_points float64 samples

all little-endian.  A JSON sidecar (same stem, ``.json``) carries the
physical parameters, family, step control, field names, record count,
a whole-file sha256 and per-record crc32 checksums.
"""

import hashlib
import json
import struct
import zlib
from pathlib import Path

import numpy as np

from wavesplit.errors import WaveSplitError
from wavesplit.families import ModelFamily
from wavesplit.grid import Field, PeriodicGrid
from wavesplit.params import PhysParams
from wavesplit.solvers import IBState, WaveState
from wavesplit.stepping import StepControl

MAGIC = b"WSNP"
VERSION = 1


class SnapshotFormatError(WaveSplitError):
    """Corrupt or mismatched snapshot file."""


def _pack_record(grid: PeriodicGrid, t: float, fields) -> bytes:
    head = struct.pack("<dId", grid.half_length, grid.n_points, t)
    head += struct.pack("<I", len(fields))
    body = b"".join(np.asarray(f.values, dtype="<f8").tobytes() for f in fields)
    return head + body


def _write(path: Path, grid: PeriodicGrid, times, field_lists, field_names,
           meta: dict):
    records = [_pack_record(grid, t, fl) for t, fl in zip(times, field_lists)]
    payload = MAGIC + struct.pack("<I", VERSION) + b"".join(records)
    path.write_bytes(payload)
    sidecar = {
        "format": f"wsnp-{VERSION}",
        "grid": {"half_length": grid.half_length, "n_points": grid.n_points},
        "field_names": list(field_names),
        "record_count": len(records),
        "sha256": hashlib.sha256(payload).hexdigest(),
        "crc32": [zlib.crc32(rec) for rec in records],
        **meta,
    }
    path.with_suffix(".json").write_text(
        json.dumps(sidecar, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def _params_meta(params: PhysParams) -> dict:
    return {
        "epsilon": params.epsilon,
        "delta": params.delta,
        "sobolev_index": params.sobolev_index,
    }


def _ctrl_meta(ctrl: StepControl | None) -> dict:
    if ctrl is None:
        return {}
    return {
        "dt": ctrl.dt,
        "scheme": ctrl.scheme,
        "t_end": ctrl.t_end,
        "snapshot_stride": ctrl.snapshot_stride,
    }


def save_wave_trajectory(path, traj: list, ctrl: StepControl | None = None):
    """Write model-equation snapshots (single field per record)."""
    path = Path(path)
    first = traj[0]
    _write(
        path,
        first.w.grid,
        [st.t for st in traj],
        [[st.w] for st in traj],
        ["w"],
        {
            "equation": first.family.label,
            "params": _params_meta(first.params),
            "ctrl": _ctrl_meta(ctrl),
        },
    )


def save_ib_trajectory(path, traj: list, ctrl: StepControl | None = None):
    """Write two-directional-equation snapshots (u and u_t per record)."""
    path = Path(path)
    first = traj[0]
    _write(
        path,
        first.u.grid,
        [st.t for st in traj],
        [[st.u, st.p] for st in traj],
        ["u", "p"],
        {
            "equation": "IB",
            "params": _params_meta(first.params),
            "ctrl": _ctrl_meta(ctrl),
        },
    )


def _read_payload(path: Path):
    payload = path.read_bytes()
    if payload[:4] != MAGIC:
        raise SnapshotFormatError(f"{path}: bad magic")
    (version,) = struct.unpack_from("<I", payload, 4)
    if version != VERSION:
        raise SnapshotFormatError(f"{path}: unsupported version {version}")
    sidecar_path = path.with_suffix(".json")
    sidecar = json.loads(sidecar_path.read_text(encoding="utf-8"))
    if sidecar.get("sha256") != hashlib.sha256(payload).hexdigest():
        raise SnapshotFormatError(f"{path}: sha256 mismatch with sidecar")
    offset = 8
    records = []
    while offset < len(payload):
        half_length, n_points, t = struct.unpack_from("<dId", payload, offset)
        (n_fields,) = struct.unpack_from("<I", payload, offset + 20)
        start = offset + 24
        length = n_fields * n_points * 8
        raw = payload[offset:start + length]
        fields = [
            np.frombuffer(payload, dtype="<f8", count=n_points,
                          offset=start + i * n_points * 8).astype(np.float64)
            for i in range(n_fields)
        ]
        records.append((half_length, n_points, t, fields, zlib.crc32(raw)))
        offset = start + length
    if len(records) != sidecar.get("record_count"):
        raise SnapshotFormatError(f"{path}: record count mismatch")
    for rec, crc in zip(records, sidecar.get("crc32", [])):
        if rec[4] != crc:
            raise SnapshotFormatError(f"{path}: record crc32 mismatch")
    return records, sidecar


def load_trajectory(path):
    """Reconstruct WaveState or IBState snapshots from a .snap file."""
    path = Path(path)
    records, sidecar = _read_payload(path)
    params = PhysParams(**sidecar["params"])
    equation = sidecar["equation"]
    half_length, n_points = records[0][0], records[0][1]
    grid = PeriodicGrid(half_length=half_length, n_points=n_points)
    states = []
    if equation == "IB":
        for _, _, t, fields, _ in records:
            states.append(IBState(u=Field(grid, fields[0]), p=Field(grid, fields[1]),
                                  t=t, params=params))
    else:
        family = ModelFamily.parse(equation)
        for _, _, t, fields, _ in records:
            states.append(WaveState(w=Field(grid, fields[0]), t=t, params=params,
                                    family=family))
    return states, sidecar

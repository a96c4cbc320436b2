"""Report emission: CSV measurement rows, JSON summary, plot-data files.

Measurement outputs contain no wall-clock data, so identical configs
produce byte-identical files; timestamps live in provenance.json only.
"""

import csv
import json
import time
from dataclasses import asdict
from pathlib import Path

from wavesplit._version import __version__
from wavesplit.studies import RunRecord, SnapshotRow, StudyResult

CSV_COLUMNS = [
    "run", "family", "epsilon", "delta", "s", "t",
    "r_norm", "energy", "energy_quadratic", "f_plus_norm", "f_minus_norm",
    "f_tilde_norm", "interaction_norm", "linf_u", "linf_r", "in_window",
    "two_route_rel", "status",
]


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _write_csv(path: Path, records: list):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for rec in records:
            for row in rec.rows:
                writer.writerow([
                    _cell(rec.index), rec.family, _cell(rec.epsilon),
                    _cell(rec.delta), _cell(row.s), _cell(row.t),
                    _cell(row.r_norm), _cell(row.energy),
                    _cell(row.energy_quadratic),
                    _cell(row.f_plus_norm), _cell(row.f_minus_norm),
                    _cell(row.f_tilde_norm), _cell(row.interaction_norm),
                    _cell(row.linf_u), _cell(row.linf_r),
                    _cell(row.in_window), _cell(row.two_route_rel),
                    rec.status,
                ])
            if not rec.rows:  # flagged (blow-up) runs still get one row
                writer.writerow([
                    _cell(rec.index), rec.family, _cell(rec.epsilon),
                    _cell(rec.delta), "", _cell(rec.blowup_time),
                    "", "", "", "", "", "", "", "", "", "", "", rec.status,
                ])


def _write_plot_data(out: Path, result: StudyResult):
    plots = out / "plotdata"
    plots.mkdir(exist_ok=True)
    ok = [r for r in result.records if r.status == "ok"]
    if result.study == "decouple":
        for rec in ok:
            path = plots / f"error_vs_t_run{rec.index:03d}.csv"
            with open(path, "w", newline="", encoding="utf-8") as fh:
                writer = csv.writer(fh)
                writer.writerow(["t", "r_norm"])
                s0 = min(row.s for row in rec.rows)
                for row in rec.rows:
                    if row.s == s0:
                        writer.writerow([_cell(row.t), _cell(row.r_norm)])
        with open(plots / "error_vs_delta.csv", "w", newline="",
                  encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["family", "s", "delta", "terminal_error"])
            for rec in ok:
                for key, val in sorted(rec.terminal_error.items()):
                    writer.writerow([rec.family, key, _cell(rec.delta), _cell(val)])
    else:
        with open(plots / "residual_vs_delta.csv", "w", newline="",
                  encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["family", "s", "delta", "sup_f_plus", "sup_f_minus"])
            for rec in ok:
                for key in sorted(rec.residual_sup_plus):
                    writer.writerow([
                        rec.family, key, _cell(rec.delta),
                        _cell(rec.residual_sup_plus[key]),
                        _cell(rec.residual_sup_minus.get(key)),
                    ])


def _record_aggregates(rec: RunRecord) -> dict:
    data = asdict(rec)
    data.pop("rows")
    return data


def write_records(path, result: StudyResult):
    """Full measurement rows + aggregates, re-loadable by `report`."""
    payload = {
        "label": result.label,
        "study": result.study,
        "config_hash": result.config_hash,
        "records": [asdict(rec) for rec in result.records],
        "fits": result.fits,
        "checks": result.checks,
        "passed": result.passed,
        "largest_passing_delta": result.largest_passing_delta,
    }
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n",
                          encoding="utf-8")


def load_records(path) -> StudyResult:
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    records = []
    for raw in payload["records"]:
        rows = [SnapshotRow(**row) for row in raw.pop("rows")]
        records.append(RunRecord(rows=rows, **raw))
    return StudyResult(
        label=payload["label"],
        study=payload["study"],
        config_hash=payload["config_hash"],
        records=records,
        fits=payload["fits"],
        checks=payload["checks"],
        passed=payload["passed"],
        largest_passing_delta=payload["largest_passing_delta"],
    )


def emit_report(result: StudyResult, out_dir) -> dict:
    """Write runs.csv, summary.json, records.json, plot data, provenance."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    _write_csv(out / "runs.csv", result.records)
    summary = {
        "label": result.label,
        "study": result.study,
        "config_hash": result.config_hash,
        "fits": result.fits,
        "criteria": {result.label: {"checks": result.checks, "pass": result.passed}},
        "largest_passing_delta": result.largest_passing_delta,
        "runs": [_record_aggregates(rec) for rec in result.records],
    }
    (out / "summary.json").write_text(
        json.dumps(summary, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    write_records(out / "records.json", result)
    _write_plot_data(out, result)
    (out / "provenance.json").write_text(
        json.dumps({
            "code_version": __version__,
            "written_at_unix": time.time(),
        }, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return {
        "csv": out / "runs.csv",
        "summary": out / "summary.json",
        "records": out / "records.json",
    }

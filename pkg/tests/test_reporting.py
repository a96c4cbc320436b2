import csv
import json

from wavesplit.config import ExperimentConfig
from wavesplit.reporting import CSV_COLUMNS, emit_report, load_records, write_records
from wavesplit.studies import StudyResult, run_decoupling_study

SMALL = dict(half_length=64.0, n_points=512, horizon=2.0, snapshots=6)


def _small_result():
    cfg = ExperimentConfig(label="report-test", deltas=(0.1, 0.2, 0.4),
                           checks={"terminal_slope": {"target": 2.0, "tol": 1.0}},
                           **SMALL)
    return run_decoupling_study(cfg)


def test_emit_report_files(tmp_path):
    result = _small_result()
    paths = emit_report(result, tmp_path)
    assert paths["csv"].exists()
    assert paths["summary"].exists()
    assert paths["records"].exists()
    assert (tmp_path / "provenance.json").exists()
    assert (tmp_path / "plotdata" / "error_vs_delta.csv").exists()
    assert (tmp_path / "plotdata" / "error_vs_t_run000.csv").exists()


def test_csv_schema_and_row_count(tmp_path):
    result = _small_result()
    emit_report(result, tmp_path)
    with open(tmp_path / "runs.csv", newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == CSV_COLUMNS
    expected = sum(len(rec.rows) for rec in result.records)
    assert len(rows) - 1 == expected
    # 3 runs x 6 snapshots x 1 sobolev index
    assert expected == 3 * 6


def test_empty_records_csv_is_header_only(tmp_path):
    result = StudyResult(label="empty", study="decouple", config_hash="0",
                         records=[], fits={}, checks={}, passed=True,
                         largest_passing_delta=None)
    emit_report(result, tmp_path)
    with open(tmp_path / "runs.csv", newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows == [CSV_COLUMNS]


def test_summary_keys(tmp_path):
    result = _small_result()
    emit_report(result, tmp_path)
    summary = json.loads((tmp_path / "summary.json").read_text())
    assert summary["label"] == "report-test"
    assert "report-test" in summary["criteria"]
    crit = summary["criteria"]["report-test"]
    assert set(crit) == {"checks", "pass"}
    assert "terminal_slope" in crit["checks"]
    assert summary["fits"]["CH"]["2.0"]["terminal_error"]["slope"] > 0


def test_records_round_trip(tmp_path):
    result = _small_result()
    path = tmp_path / "records.json"
    write_records(path, result)
    loaded = load_records(path)
    assert loaded.label == result.label
    assert loaded.passed == result.passed
    assert loaded.records == result.records
    assert loaded.fits == result.fits


def test_emit_with_every_check_kind(tmp_path):
    # spread checks carry numpy-derived values; the summary must stay JSON-clean
    cfg = ExperimentConfig(
        label="all-checks", deltas=(0.1, 0.2, 0.4),
        checks={"terminal_slope": {"target": 2.0, "tol": 1.0},
                "terminal_slope_min": {"min": 1.0},
                "rt0_slope": {"target": 2.0, "tol": 1.0},
                "bound_spread": {"max": 5.0},
                "energy_spread": {"max": 5.0},
                "no_blowups": {"max": 0}},
        **SMALL)
    result = run_decoupling_study(cfg)
    emit_report(result, tmp_path)
    summary = json.loads((tmp_path / "summary.json").read_text())
    checks = summary["criteria"]["all-checks"]["checks"]
    assert set(checks) == {"terminal_slope", "terminal_slope_min", "rt0_slope",
                           "bound_spread", "energy_spread", "no_blowups"}
    assert all(isinstance(c["pass"], bool) for c in checks.values())


def test_reemit_is_deterministic(tmp_path):
    result = _small_result()
    emit_report(result, tmp_path / "a")
    loaded = load_records(tmp_path / "a" / "records.json")
    emit_report(loaded, tmp_path / "b")
    assert (tmp_path / "a" / "runs.csv").read_bytes() == \
        (tmp_path / "b" / "runs.csv").read_bytes()
    assert (tmp_path / "a" / "summary.json").read_bytes() == \
        (tmp_path / "b" / "summary.json").read_bytes()

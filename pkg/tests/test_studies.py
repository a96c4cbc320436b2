import wavesplit.studies as studies
from wavesplit.config import ExperimentConfig, ProfileSpec
from wavesplit.errors import BlowUpError
from wavesplit.studies import run_decoupling_study, run_residual_study

SMALL = dict(half_length=64.0, n_points=512, horizon=2.0, snapshots=6)


def test_empty_sweep_gives_empty_records():
    cfg = ExperimentConfig(deltas=(), **SMALL)
    result = run_decoupling_study(cfg)
    assert result.records == []
    assert result.passed  # no checks declared


def test_zero_data_residual_study():
    cfg = ExperimentConfig(
        study="residual", u0=ProfileSpec(shape="zero"),
        v0=ProfileSpec(shape="zero"), deltas=(0.1, 0.2), **SMALL)
    result = run_residual_study(cfg)
    for rec in result.records:
        assert rec.residual_sup_plus["2.0"] == 0.0
        assert rec.residual_sup_minus["2.0"] == 0.0


def test_unidirectional_left_wave_stays_zero():
    cfg = ExperimentConfig(
        v0=ProfileSpec(shape="minus_u0"), ib_velocity="model",
        deltas=(0.1, 0.2, 0.4), **SMALL)
    result = run_decoupling_study(cfg)
    rec = result.records[0]
    assert rec.bound_form == "unidirectional"
    for row in rec.rows:
        assert row.f_minus_norm == 0.0
        assert row.interaction_norm == 0.0
        assert row.f_tilde_norm == row.f_plus_norm
    # the initial rate is exactly zero here, so no rate fit is reported
    assert result.fits["CH"]["2.0"]["rt0"] is None
    assert result.fits["CH"]["2.0"]["terminal_error"] is not None


def test_sweep_monotone_in_delta():
    cfg = ExperimentConfig(deltas=(0.1, 0.2, 0.4), **SMALL)
    result = run_decoupling_study(cfg)
    terms = [rec.terminal_error["2.0"] for rec in result.records]
    assert terms[0] < terms[1] < terms[2]


def test_blowup_becomes_flagged_record(monkeypatch):
    def explode(*args, **kwargs):
        raise BlowUpError(1.25)

    monkeypatch.setattr(studies, "model_solve", explode)
    cfg = ExperimentConfig(deltas=(0.1, 0.2), **SMALL)
    result = run_decoupling_study(cfg)
    assert len(result.records) == 2
    assert all(rec.status == "blowup" for rec in result.records)
    assert all(rec.blowup_time == 1.25 for rec in result.records)
    assert all(rec.rows == [] for rec in result.records)


def test_workers_match_serial():
    cfg = ExperimentConfig(deltas=(0.1, 0.2), **SMALL)
    serial = run_decoupling_study(cfg, workers=1)
    parallel = run_decoupling_study(cfg, workers=2)
    assert [r.terminal_error for r in serial.records] == \
        [r.terminal_error for r in parallel.records]
    assert [r.index for r in parallel.records] == [0, 1]


def test_checks_fail_closed():
    cfg = ExperimentConfig(
        deltas=(0.1, 0.2, 0.4),
        checks={"terminal_slope": {"target": 4.0, "tol": 0.1}}, **SMALL)
    result = run_decoupling_study(cfg)
    assert not result.passed  # general data scales ~ delta^2, not delta^4


def test_kdv_study_runs():
    cfg = ExperimentConfig(families=("KDV",), deltas=(0.2, 0.4), **SMALL)
    result = run_decoupling_study(cfg)
    assert all(r.status == "ok" for r in result.records)
    assert all(r.bound_form == "kdv" for r in result.records)
    assert result.records[0].terminal_error["2.0"] > 0


def test_multi_family_residual_study():
    cfg = ExperimentConfig(
        study="residual", families=("CH", "BBM"), deltas=(0.2, 0.4), **SMALL)
    result = run_residual_study(cfg)
    assert [r.family for r in result.records] == ["CH", "CH", "BBM", "BBM"]
    assert all(r.two_route_max_rel < 1e-4 for r in result.records)


def test_combined_residual_slope_on_eps_eq_delta_sweep():
    # with eps = delta the interaction term dominates: sup|f~| scales ~ eps^1
    cfg = ExperimentConfig(sweep_rule="eps_eq_delta",
                           deltas=(0.05, 0.1, 0.2, 0.4),
                           study="residual", **SMALL)
    result = run_residual_study(cfg)
    points = []
    for rec in result.records:
        sup_tilde = max(row.f_tilde_norm for row in rec.rows if row.s == 2.0)
        points.append((rec.epsilon, sup_tilde))
    from wavesplit.ratefit import fit_loglog_slope

    fit = fit_loglog_slope(points)
    assert abs(fit.slope - 1.0) <= 0.2


def test_uniform_bound_monotone_and_finite():
    cfg = ExperimentConfig(deltas=(0.05, 0.1, 0.2, 0.4), **SMALL)
    result = run_decoupling_study(cfg)
    bounds = [rec.uniform_bound for rec in result.records]
    assert all(b < 1e3 for b in bounds)
    # shrinking (eps, delta) along eps = delta^2 never increases the sup
    assert all(a <= b * (1 + 1e-12) for a, b in zip(bounds, bounds[1:]))


def test_validity_window_full_in_benchmark_regime():
    cfg = ExperimentConfig(deltas=(0.05, 0.1, 0.2), **SMALL)
    result = run_decoupling_study(cfg)
    for rec in result.records:
        assert rec.validity_window == cfg.horizon
        assert all(row.in_window for row in rec.rows)

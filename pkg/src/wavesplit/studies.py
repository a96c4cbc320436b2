"""Sweep orchestration: decoupling and residual studies over (eps, delta)
ladders, with per-snapshot measurements and rate-fit checks.

Runs are deterministic given the config; sweep points are independent and
may execute on a process pool, with results merged in sweep order.  A
blow-up aborts only its own run, which is recorded as a flagged record.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from wavesplit._version import __version__
from wavesplit.analysis import error_state, split_initial_data
from wavesplit.config import ExperimentConfig, config_hash, parse, serialize
from wavesplit.energy import energy, energy_rate_check, uniform_bound_monitor
from wavesplit.errors import BlowUpError, ConfigError
from wavesplit.families import ModelFamily
from wavesplit.grid import PeriodicGrid
from wavesplit.params import PhysParams
from wavesplit.profiles import build_profile
from wavesplit.ratefit import RateFit, fit_loglog_slope
from wavesplit.residuals import defining_residual, residual_tilde
from wavesplit.solvers import (
    default_control,
    ib_solve,
    ib_solve_from_velocity,
    model_rhs,
    model_solve,
)
from wavesplit.spectral import linf_norm, sobolev_norm, spectral_derivative
from wavesplit.stepping import StepControl


@dataclass
class SnapshotRow:
    t: float
    s: float
    r_norm: float | None = None
    energy: float | None = None
    energy_quadratic: float | None = None
    f_plus_norm: float | None = None
    f_minus_norm: float | None = None
    f_tilde_norm: float | None = None
    interaction_norm: float | None = None
    linf_u: float | None = None
    linf_r: float | None = None
    in_window: bool | None = None
    two_route_rel: float | None = None


@dataclass
class RunRecord:
    index: int
    family: str
    epsilon: float
    delta: float
    status: str = "ok"
    blowup_time: float | None = None
    config_hash: str = ""
    bound_form: str | None = None
    rows: list = field(default_factory=list)
    terminal_error: dict = field(default_factory=dict)
    bound_constant: dict = field(default_factory=dict)
    energy_c: dict = field(default_factory=dict)
    rt0_norm: dict = field(default_factory=dict)
    residual_sup_plus: dict = field(default_factory=dict)
    residual_sup_minus: dict = field(default_factory=dict)
    validity_window: float | None = None
    uniform_bound: float | None = None
    two_route_max_rel: float | None = None
    code_version: str = __version__


@dataclass
class StudyResult:
    label: str
    study: str
    config_hash: str
    records: list
    fits: dict
    checks: dict
    passed: bool
    largest_passing_delta: float | None


def _skey(s: float) -> str:
    return repr(float(s))


def _build_data(cfg: ExperimentConfig):
    grid = PeriodicGrid(cfg.half_length, cfg.n_points)
    u0 = build_profile(grid, cfg.u0.shape, cfg.u0.amplitude, cfg.u0.width,
                       cfg.u0.center)
    if cfg.v0.shape == "minus_u0":
        v0 = -u0
    else:
        v0 = build_profile(grid, cfg.v0.shape, cfg.v0.amplitude, cfg.v0.width,
                           cfg.v0.center)
    return grid, u0, v0


def _controls(cfg, grid, params, family):
    ctrl_m = default_control(grid, params, cfg.horizon, family, cfg.snapshots)
    ctrl_ib = default_control(grid, params, cfg.horizon, None, cfg.snapshots)
    if cfg.dt is not None:
        ctrl_m = StepControl.uniform(cfg.horizon, cfg.dt, ctrl_m.scheme, cfg.snapshots)
        ctrl_ib = StepControl.uniform(cfg.horizon, cfg.dt, ctrl_ib.scheme, cfg.snapshots)
    return ctrl_m, ctrl_ib


def _bound_form(cfg: ExperimentConfig, tag: str) -> str:
    if tag == "KDV":
        return "kdv"
    if cfg.v0.shape == "minus_u0" and cfg.ib_velocity == "model":
        return "unidirectional"
    return "general"


def _bound_envelope(form: str, eps: float, delta: float, t: float) -> float:
    if form == "kdv":
        return eps * (1.0 + t)
    if form == "unidirectional":
        return (eps**2 + delta**4) * t
    return (eps + delta**2) + (eps + delta**4) * t


def _decouple_point(cfg: ExperimentConfig, tag: str, eps: float, delta: float,
                    index: int, snapshot_dir: str | None = None) -> RunRecord:
    grid, u0, v0 = _build_data(cfg)
    s_list = cfg.sobolev_indices
    params = PhysParams(eps, delta, s_list[0])
    fam_r, fam_l = ModelFamily.pair(tag)
    ctrl_m, ctrl_ib = _controls(cfg, grid, params, fam_r)
    wp0, wm0 = split_initial_data(u0, v0)
    record = RunRecord(index=index, family=tag, epsilon=eps, delta=delta,
                       config_hash=config_hash(cfg),
                       bound_form=_bound_form(cfg, tag))
    try:
        trajp = model_solve(wp0, params, fam_r, ctrl_m)
        trajm = model_solve(wm0, params, fam_l, ctrl_m)
        if cfg.ib_velocity == "model":
            u1 = model_rhs(trajp[0]) + model_rhs(trajm[0])
            traji = ib_solve_from_velocity(u0, u1, params, ctrl_ib)
        else:
            traji = ib_solve(u0, v0, params, ctrl_ib)
    except BlowUpError as exc:
        record.status = "blowup"
        record.blowup_time = exc.time
        return record

    if cfg.export_snapshots and snapshot_dir is not None:
        from pathlib import Path

        from wavesplit.snapshots import save_ib_trajectory, save_wave_trajectory

        base = Path(snapshot_dir)
        base.mkdir(parents=True, exist_ok=True)
        save_ib_trajectory(base / f"run{index:03d}_ib.snap", traji, ctrl_ib)
        save_wave_trajectory(base / f"run{index:03d}_plus.snap", trajp, ctrl_m)
        save_wave_trajectory(base / f"run{index:03d}_minus.snap", trajm, ctrl_m)

    triples = {s: [] for s in s_list}
    r_norms = {s: [] for s in s_list}
    for st_ib, st_p, st_m in zip(traji, trajp, trajm):
        es = error_state(st_ib, st_p, st_m)
        rep = residual_tilde(st_p, st_m)
        w_tilde = st_p.w + st_m.w
        linf_u = linf_norm(st_ib.u)
        linf_r = linf_norm(es.r)
        for s in s_list:
            es_s = replace(es, params=PhysParams(eps, delta, s))
            rep_s = replace(
                rep,
                norm_plus=sobolev_norm(rep.f_plus, s),
                norm_minus=sobolev_norm(rep.f_minus, s),
                norm_tilde=sobolev_norm(rep.f_tilde, s),
            )
            ev = energy(es_s, w_tilde)
            r_norm = sobolev_norm(es.r, s)
            triples[s].append((es_s, ev, rep_s))
            r_norms[s].append(r_norm)
            record.rows.append(SnapshotRow(
                t=es.t, s=s, r_norm=r_norm, energy=ev.value,
                energy_quadratic=ev.quadratic_part,
                f_plus_norm=rep_s.norm_plus, f_minus_norm=rep_s.norm_minus,
                f_tilde_norm=rep_s.norm_tilde,
                interaction_norm=sobolev_norm(rep.interaction, s),
                linf_u=linf_u, linf_r=linf_r,
            ))

    times = [st.t for st in traji]
    for s in s_list:
        key = _skey(s)
        norms = r_norms[s]
        record.terminal_error[key] = norms[-1]
        ratios = [
            n / _bound_envelope(record.bound_form, eps, delta, t)
            for n, t in zip(norms, times)
            if _bound_envelope(record.bound_form, eps, delta, t) > 0
        ]
        record.bound_constant[key] = max(ratios) if ratios else 0.0
        record.energy_c[key] = energy_rate_check(triples[s]).empirical_c
        record.rt0_norm[key] = sobolev_norm(triples[s][0][0].r_t, s)
        # mark validity-window membership on this s's rows
        window = times[-1]
        crossed = False
        for row, n, t in zip(
            [r for r in record.rows if r.s == s], norms, times
        ):
            if not crossed and n > 1.0:
                crossed = True
                window = t
            row.in_window = not crossed or t < window
    s0 = s_list[0]
    window = times[-1]
    for n, t in zip(r_norms[s0], times):
        if n > 1.0:
            window = t
            break
    record.validity_window = window
    record.uniform_bound = max(uniform_bound_monitor(trajp, 1),
                               uniform_bound_monitor(trajm, 1))
    return record


def _residual_point(cfg: ExperimentConfig, tag: str, eps: float, delta: float,
                    index: int) -> RunRecord:
    grid, u0, v0 = _build_data(cfg)
    s_list = cfg.sobolev_indices
    params = PhysParams(eps, delta, s_list[0])
    fam_r, fam_l = ModelFamily.pair(tag)
    ctrl_m, _ = _controls(cfg, grid, params, fam_r)
    wp0, wm0 = split_initial_data(u0, v0)
    record = RunRecord(index=index, family=tag, epsilon=eps, delta=delta,
                       config_hash=config_hash(cfg))
    try:
        trajp = model_solve(wp0, params, fam_r, ctrl_m)
        trajm = model_solve(wm0, params, fam_l, ctrl_m)
    except BlowUpError as exc:
        record.status = "blowup"
        record.blowup_time = exc.time
        return record

    sup_p = {s: 0.0 for s in s_list}
    sup_m = {s: 0.0 for s in s_list}
    max_rel = 0.0
    s0 = s_list[0]
    for st_p, st_m in zip(trajp, trajm):
        rep = residual_tilde(st_p, st_m)
        rel = 0.0
        for st, f in ((st_p, rep.f_plus), (st_m, rep.f_minus)):
            direct = defining_residual(st)
            diff = spectral_derivative(f, 1) - direct
            denom = sobolev_norm(direct, s0)
            if denom > 0:
                rel = max(rel, sobolev_norm(diff, s0) / denom)
        max_rel = max(max_rel, rel)
        for s in s_list:
            np_norm = sobolev_norm(rep.f_plus, s)
            nm_norm = sobolev_norm(rep.f_minus, s)
            sup_p[s] = max(sup_p[s], np_norm)
            sup_m[s] = max(sup_m[s], nm_norm)
            record.rows.append(SnapshotRow(
                t=st_p.t, s=s, f_plus_norm=np_norm, f_minus_norm=nm_norm,
                f_tilde_norm=sobolev_norm(rep.f_tilde, s),
                interaction_norm=sobolev_norm(rep.interaction, s),
                two_route_rel=rel,
            ))
    for s in s_list:
        record.residual_sup_plus[_skey(s)] = sup_p[s]
        record.residual_sup_minus[_skey(s)] = sup_m[s]
    record.two_route_max_rel = max_rel
    return record


def _run_point_from_text(args):
    cfg_text, study, tag, eps, delta, index, snapshot_dir = args
    cfg = parse(cfg_text)
    if study == "decouple":
        return _decouple_point(cfg, tag, eps, delta, index, snapshot_dir)
    return _residual_point(cfg, tag, eps, delta, index)


def _execute(cfg: ExperimentConfig, study: str, workers: int,
             snapshot_dir: str | None = None) -> list:
    tasks = []
    index = 0
    for tag in cfg.families:
        for eps, delta in cfg.sweep_points():
            tasks.append((serialize(cfg), study, tag, eps, delta, index,
                          snapshot_dir))
            index += 1
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_run_point_from_text, tasks))
    else:
        records = [_run_point_from_text(t) for t in tasks]
    return sorted(records, key=lambda r: r.index)


# -- fits and checks ----------------------------------------------------------

def _fit_or_none(points) -> RateFit | None:
    try:
        return fit_loglog_slope(points)
    except ValueError:
        return None


def _fits_decouple(cfg, records) -> dict:
    fits = {}
    for tag in cfg.families:
        per_s = {}
        group = [r for r in records if r.family == tag and r.status == "ok"]
        for s in cfg.sobolev_indices:
            key = _skey(s)
            pts_term = [(r.delta, r.terminal_error[key]) for r in group
                        if r.terminal_error.get(key, 0.0) > 0]
            # initial rates at roundoff level (exact model-velocity start)
            # would make the fit pure noise
            pts_rt0 = [(r.delta, r.rt0_norm[key]) for r in group
                       if r.rt0_norm.get(key, 0.0) > 1e-12]
            per_s[key] = {
                "terminal_error": _fit_or_none(pts_term),
                "rt0": _fit_or_none(pts_rt0),
            }
        fits[tag] = per_s
    return fits


def _fits_residual(cfg, records) -> dict:
    fits = {}
    for tag in cfg.families:
        per_s = {}
        group = [r for r in records if r.family == tag and r.status == "ok"]
        for s in cfg.sobolev_indices:
            key = _skey(s)
            pts = [(r.delta, r.residual_sup_plus[key]) for r in group
                   if r.residual_sup_plus.get(key, 0.0) > 0]
            per_s[key] = {"residual_sup": _fit_or_none(pts)}
        fits[tag] = per_s
    return fits


def _spread(values) -> float:
    finite = [v for v in values if np.isfinite(v)]
    if len(finite) != len(values) or not values:
        return float("inf")
    med = float(np.median(np.abs(finite)))
    if med == 0.0:
        return 1.0 if max(abs(v) for v in finite) == 0.0 else float("inf")
    return float(max(abs(v) for v in finite) / med)


def _evaluate_checks(cfg, records, fits) -> dict:
    results = {}
    s_key = _skey(cfg.sobolev_indices[0])
    ok = [r for r in records if r.status == "ok"]

    def slope_of(kind):
        out = {}
        for tag in cfg.families:
            f = fits.get(tag, {}).get(s_key, {}).get(kind)
            out[tag] = f
        return out

    for name, spec in cfg.checks.items():
        if name == "terminal_slope":
            detail, passed = {}, True
            for tag, f in slope_of("terminal_error").items():
                if f is None:
                    detail[tag] = None
                    passed = False
                    continue
                good = abs(f.slope - spec["target"]) <= spec["tol"]
                if "min_r2" in spec:
                    good = good and f.r_squared >= spec["min_r2"]
                detail[tag] = {"slope": f.slope, "r_squared": f.r_squared, "pass": good}
                passed = passed and good
            results[name] = {"detail": detail, "pass": passed}
        elif name == "terminal_slope_min":
            detail, passed = {}, True
            for tag, f in slope_of("terminal_error").items():
                good = f is not None and f.slope >= spec["min"]
                detail[tag] = None if f is None else {"slope": f.slope, "pass": good}
                passed = passed and good
            results[name] = {"detail": detail, "pass": passed}
        elif name == "rt0_slope":
            detail, passed = {}, True
            for tag, f in slope_of("rt0").items():
                good = f is not None and abs(f.slope - spec["target"]) <= spec["tol"]
                detail[tag] = None if f is None else {"slope": f.slope, "pass": good}
                passed = passed and good
            results[name] = {"detail": detail, "pass": passed}
        elif name == "residual_slope":
            detail, passed = {}, True
            for tag, f in slope_of("residual_sup").items():
                if f is None:
                    detail[tag] = None
                    passed = False
                    continue
                good = abs(f.slope - spec["target"]) <= spec["tol"]
                if "min_r2" in spec:
                    good = good and f.r_squared >= spec["min_r2"]
                detail[tag] = {"slope": f.slope, "r_squared": f.r_squared, "pass": good}
                passed = passed and good
            results[name] = {"detail": detail, "pass": passed}
        elif name == "bound_spread":
            spread = _spread([r.bound_constant.get(s_key, float("inf")) for r in ok])
            results[name] = {"spread": spread, "pass": spread < spec["max"]}
        elif name == "energy_spread":
            spread = _spread([r.energy_c.get(s_key, float("inf")) for r in ok])
            results[name] = {"spread": spread, "pass": spread < spec["max"]}
        elif name == "two_route":
            worst = max((r.two_route_max_rel or 0.0) for r in ok) if ok else float("inf")
            results[name] = {"max_rel": worst, "pass": worst <= spec["max_rel"]}
        elif name == "no_blowups":
            n_bad = sum(1 for r in records if r.status != "ok")
            results[name] = {"blowups": n_bad, "pass": n_bad <= spec.get("max", 0)}
        else:
            raise ConfigError(f"unknown check {name!r}")
    return results


def _largest_passing_delta(cfg, records) -> float | None:
    best = None
    for r in records:
        if r.status != "ok":
            continue
        if r.validity_window is not None and r.validity_window < cfg.horizon * (1 - 1e-9):
            continue
        best = r.delta if best is None else max(best, r.delta)
    return best


def _fit_plain(f) -> dict | None:
    if f is None:
        return None
    data = asdict(f)
    data["points"] = [list(p) for p in data["points"]]
    return data


def _finish(cfg: ExperimentConfig, study: str, records, fits) -> StudyResult:
    checks = _evaluate_checks(cfg, records, fits)
    passed = all(c["pass"] for c in checks.values()) if checks else True
    fits_plain = {
        tag: {
            s: {kind: _fit_plain(f) for kind, f in kinds.items()}
            for s, kinds in per_s.items()
        }
        for tag, per_s in fits.items()
    }
    return StudyResult(
        label=cfg.label,
        study=study,
        config_hash=config_hash(cfg),
        records=records,
        fits=fits_plain,
        checks=checks,
        passed=passed,
        largest_passing_delta=_largest_passing_delta(cfg, records),
    )


def run_decoupling_study(cfg: ExperimentConfig, workers: int = 1,
                         snapshot_dir: str | None = None) -> StudyResult:
    """Split, solve all three equations per sweep point, measure errors."""
    cfg.validate()
    records = _execute(cfg, "decouple", workers, snapshot_dir)
    return _finish(cfg, "decouple", records, _fits_decouple(cfg, records))


def run_residual_study(cfg: ExperimentConfig, workers: int = 1) -> StudyResult:
    """Solve the model pairs only and measure residual norms."""
    cfg.validate()
    records = _execute(cfg, "residual", workers)
    return _finish(cfg, "residual", records, _fits_residual(cfg, records))


def run_single_solve(cfg: ExperimentConfig):
    """One trajectory of one equation (for snapshot export)."""
    cfg.validate()
    grid, u0, v0 = _build_data(cfg)
    eps, delta = cfg.sweep_points()[0]
    params = PhysParams(eps, delta, cfg.sobolev_indices[0])
    if cfg.solve_equation.upper() == "IB":
        ctrl = default_control(grid, params, cfg.horizon, None, cfg.snapshots)
        if cfg.dt is not None:
            ctrl = StepControl.uniform(cfg.horizon, cfg.dt, ctrl.scheme, cfg.snapshots)
        return ib_solve(u0, v0, params, ctrl), ctrl
    family = ModelFamily.parse(cfg.solve_equation)
    ctrl = default_control(grid, params, cfg.horizon, family, cfg.snapshots)
    if cfg.dt is not None:
        ctrl = StepControl.uniform(cfg.horizon, cfg.dt, ctrl.scheme, cfg.snapshots)
    w0 = split_initial_data(u0, v0)[0 if family.direction > 0 else 1]
    return model_solve(w0, params, family, ctrl), ctrl

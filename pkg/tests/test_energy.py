import pytest

from conftest import band_limited
from wavesplit.analysis import ErrorState
from wavesplit.energy import (
    EnergyValue,
    energy,
    energy_rate_check,
    uniform_bound_monitor,
    validity_window,
)
from wavesplit.families import ModelFamily
from wavesplit.grid import PeriodicGrid, zero_field
from wavesplit.params import PhysParams
from wavesplit.residuals import ResidualReport
from wavesplit.solvers import WaveState
from wavesplit.spectral import antiderivative, sobolev_norm, spectral_derivative

GRID = PeriodicGrid(32.0, 256)


def _zero_error_state(t=0.0, params=None):
    z = zero_field(GRID)
    return ErrorState(r=z, rho=z, r_t=z, rho_t=z, t=t,
                      params=params or PhysParams(0.01, 0.1))


def _random_error_state(rng, params, r_scale=0.5):
    # consistent (r, rho, r_t, rho_t): r built as a derivative, so mean-zero
    psi = band_limited(GRID, rng, k_band=20)
    r = spectral_derivative(psi, 1)
    s = params.sobolev_index
    r = r * (r_scale / max(sobolev_norm(r, s), 1e-30))
    psi_t = band_limited(GRID, rng, k_band=20)
    r_t = spectral_derivative(psi_t, 1)
    return ErrorState(r=r, rho=antiderivative(r), r_t=r_t,
                      rho_t=antiderivative(r_t), t=0.0, params=params)


def _zero_report(params):
    z = zero_field(GRID)
    return ResidualReport(f_plus=z, f_minus=z, interaction=z, f_tilde=z,
                          norm_plus=0.0, norm_minus=0.0, norm_tilde=0.0)


def test_energy_zero_state():
    ev = energy(_zero_error_state(), zero_field(GRID))
    assert ev.value == 0.0
    assert ev.quadratic_part == 0.0
    assert ev.epsilon_terms == 0.0


def test_energy_quadratic_part_matches_direct_norms(rng):
    params = PhysParams(1e-12, 0.3)
    es = _random_error_state(rng, params)
    ev = energy(es, band_limited(GRID, rng, k_band=10))
    s = params.sobolev_index
    direct = 0.5 * (sobolev_norm(es.rho_t, s) ** 2
                    + params.delta**2 * sobolev_norm(es.r_t, s) ** 2
                    + sobolev_norm(es.r, s) ** 2)
    assert ev.quadratic_part == pytest.approx(direct, rel=1e-12)
    # eps ~ 0: the energy reduces to its quadratic part
    assert ev.value**2 == pytest.approx(direct, rel=1e-9)


def test_energy_positive_definite_in_regime(rng):
    # |r|_s <= 1 and small eps: E^2 >= (quadratic sum)/4
    for _ in range(25):
        delta = float(rng.uniform(0.05, 0.5))
        params = PhysParams(min(0.05, delta), delta)
        es = _random_error_state(rng, params, r_scale=float(rng.uniform(0.05, 1.0)))
        w_tilde = band_limited(GRID, rng, k_band=15)
        ev = energy(es, w_tilde)
        assert ev.value**2 >= 0.5 * ev.quadratic_part * (1 - 1e-12)


def test_energy_rate_check_zero_trajectory():
    params = PhysParams(0.01, 0.1)
    traj = [( _zero_error_state(t=0.1 * i, params=params),
              EnergyValue(0.0, 0.0, 0.0), _zero_report(params))
            for i in range(6)]
    check = energy_rate_check(traj)
    assert check.empirical_c == 0.0
    assert check.finite


def test_energy_rate_check_needs_five_snapshots():
    params = PhysParams(0.01, 0.1)
    traj = [(_zero_error_state(t=0.1 * i, params=params),
             EnergyValue(0.0, 0.0, 0.0), _zero_report(params)) for i in range(4)]
    with pytest.raises(ValueError):
        energy_rate_check(traj)


def test_energy_rate_check_rejects_nonuniform_times():
    params = PhysParams(0.01, 0.1)
    times = [0.0, 0.1, 0.25, 0.3, 0.4, 0.5]
    traj = [(_zero_error_state(t=t, params=params),
             EnergyValue(0.0, 0.0, 0.0), _zero_report(params)) for t in times]
    with pytest.raises(ValueError):
        energy_rate_check(traj)


def test_energy_rate_check_linear_growth():
    # E(t) = t against constant forcing: ratios are 1/sup once eps E << sup
    params = PhysParams(0.01, 0.1)
    sup = 2.0
    traj = []
    for i in range(7):
        t = 0.5 * i
        rep = _zero_report(params)
        rep = ResidualReport(f_plus=rep.f_plus, f_minus=rep.f_minus,
                             interaction=rep.interaction, f_tilde=rep.f_tilde,
                             norm_plus=0.0, norm_minus=0.0, norm_tilde=sup)
        traj.append((_zero_error_state(t=t, params=params),
                     EnergyValue(t, t * t, 0.0), rep))
    check = energy_rate_check(traj)
    assert check.sup_f_tilde == sup
    assert check.finite
    assert check.empirical_c == pytest.approx(1.0 / (sup + 0.01 * 2.5), rel=0.3)


def test_energy_rate_check_near_linear_regime():
    # eps ~ 0: energy growth is driven purely by the combined residual,
    # and the empirical rate constant stays finite
    from wavesplit.analysis import error_state, split_initial_data
    from wavesplit.profiles import gaussian
    from wavesplit.residuals import residual_tilde
    from wavesplit.solvers import default_control, ib_solve, model_solve

    g = PeriodicGrid(64.0, 512)
    params = PhysParams(1e-8, 0.1)
    u0 = gaussian(g, 1.0, 4.0)
    v0 = gaussian(g, 0.5, 6.0)
    wp0, wm0 = split_initial_data(u0, v0)
    fam_r, fam_l = ModelFamily.pair("CH")
    ctrl = default_control(g, params, 2.0, fam_r, n_snapshots=6)
    ctrl_ib = default_control(g, params, 2.0, n_snapshots=6)
    trajp = model_solve(wp0, params, fam_r, ctrl)
    trajm = model_solve(wm0, params, fam_l, ctrl)
    traji = ib_solve(u0, v0, params, ctrl_ib)
    triples = []
    for st_ib, st_p, st_m in zip(traji, trajp, trajm):
        es = error_state(st_ib, st_p, st_m)
        triples.append((es, energy(es, st_p.w + st_m.w),
                        residual_tilde(st_p, st_m)))
    check = energy_rate_check(triples)
    assert check.finite
    assert check.sup_f_tilde > 0
    assert triples[-1][1].value > triples[0][1].value  # forcing-driven growth


def test_uniform_bound_monitor():
    params = PhysParams(0.04, 0.2)
    fam = ModelFamily("CH")
    zero_traj = [WaveState(w=zero_field(GRID), t=0.1 * i, params=params, family=fam)
                 for i in range(3)]
    assert uniform_bound_monitor(zero_traj, 1) == 0.0
    with pytest.raises(ValueError):
        uniform_bound_monitor(zero_traj, 0)


def test_validity_window_full_and_crossing(rng):
    params = PhysParams(0.01, 0.1)
    zeros = [_zero_error_state(t=0.5 * i, params=params) for i in range(8)]
    assert validity_window(zeros) == zeros[-1].t

    crossing = list(zeros)
    big = _random_error_state(rng, params, r_scale=1.5)
    crossing[6] = ErrorState(r=big.r, rho=big.rho, r_t=big.r_t, rho_t=big.rho_t,
                             t=zeros[6].t, params=params)
    assert validity_window(crossing) == zeros[6].t
    assert validity_window([]) == 0.0

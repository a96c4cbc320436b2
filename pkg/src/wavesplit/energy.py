"""Energy functional for the error variables and trajectory monitors.

The augmented energy

    E_s^2 = (1/2)(|rho_t|_s^2 + delta^2 |r_t|_s^2 + |r|_s^2)
            + eps <L^s(w~ r), L^s r> + (eps/2) <L^s r^2, L^s r>

(L^s the Bessel multiplier, w~ the sum of the two one-way waves) is
positive definite while |r|_s <= 1 and eps is small; its growth obeys

    dE_s/dt <= C (eps E_s + sup_t |f~|_s),

which ``energy_rate_check`` verifies empirically with centered
differences over uniformly spaced snapshots.
"""

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from wavesplit.analysis import ErrorState
from wavesplit.errors import EnergyRegimeError
from wavesplit.grid import Field
from wavesplit.residuals import ResidualReport
from wavesplit.solvers import WaveState, model_rhs
from wavesplit.spectral import apply_lambda_s, dealiased_product, l2_inner, sobolev_norm


@dataclass(frozen=True)
class EnergyValue:
    """E_s with its quadratic and O(eps) parts (E_s^2 = quadratic + eps terms)."""

    value: float
    quadratic_part: float
    epsilon_terms: float


def energy(es: ErrorState, w_tilde: Field) -> EnergyValue:
    """Evaluate the energy at one snapshot; raises if E_s^2 < 0."""
    params = es.params
    s = params.sobolev_index
    quad = 0.5 * (
        sobolev_norm(es.rho_t, s) ** 2
        + params.delta**2 * sobolev_norm(es.r_t, s) ** 2
        + sobolev_norm(es.r, s) ** 2
    )
    lam_r = apply_lambda_s(es.r, s)
    cross = l2_inner(apply_lambda_s(dealiased_product(w_tilde, es.r), s), lam_r)
    cubic = 0.5 * l2_inner(apply_lambda_s(dealiased_product(es.r, es.r), s), lam_r)
    eps_terms = params.epsilon * (cross + cubic)
    total = quad + eps_terms
    if total < 0:
        raise EnergyRegimeError(
            f"E_s^2 = {total:.3e} < 0 at t={es.t}: outside the small-eps regime"
        )
    return EnergyValue(value=math.sqrt(total), quadratic_part=quad,
                       epsilon_terms=eps_terms)


@dataclass(frozen=True)
class EnergyRateCheck:
    """Empirical constant for the energy growth inequality."""

    empirical_c: float
    ratios: tuple[float, ...]
    sup_f_tilde: float

    @property
    def finite(self) -> bool:
        return math.isfinite(self.empirical_c)


def energy_rate_check(
    trajectory: Sequence[tuple[ErrorState, EnergyValue, ResidualReport]],
) -> EnergyRateCheck:
    """Max over snapshots of (dE_s/dt)/(eps E_s + sup|f~|_s).

    dE_s/dt by centered differences; needs >= 5 uniformly spaced
    snapshots.  A zero numerator counts as ratio 0 regardless of the
    denominator (zero trajectories pass trivially).
    """
    if len(trajectory) < 5:
        raise ValueError("energy rate check needs at least 5 snapshots")
    times = np.array([es.t for es, _, _ in trajectory])
    gaps = np.diff(times)
    if not np.allclose(gaps, gaps[0], rtol=1e-6, atol=1e-12):
        raise ValueError("snapshots must be uniformly spaced")
    values = np.array([ev.value for _, ev, _ in trajectory])
    eps = trajectory[0][0].params.epsilon
    sup_f = max(rep.norm_tilde for _, _, rep in trajectory)
    ratios = []
    for i in range(1, len(values) - 1):
        dedt = (values[i + 1] - values[i - 1]) / (times[i + 1] - times[i - 1])
        denom = eps * values[i] + sup_f
        if dedt == 0.0:
            ratios.append(0.0)
        elif denom == 0.0:
            ratios.append(math.inf)
        else:
            ratios.append(float(dedt / denom))
    return EnergyRateCheck(empirical_c=max(ratios), ratios=tuple(ratios),
                           sup_f_tilde=float(sup_f))


def uniform_bound_monitor(traj: Sequence[WaveState], k: int) -> float:
    """sup over snapshots of |w|_{s+k} + |w_t|_{s+k-1}."""
    if k < 1:
        raise ValueError("k must be >= 1")
    sup = 0.0
    for state in traj:
        s = state.params.sobolev_index
        total = sobolev_norm(state.w, s + k) + sobolev_norm(model_rhs(state), s + k - 1)
        sup = max(sup, total)
    return sup


def validity_window(traj: Sequence[ErrorState]) -> float:
    """First snapshot time with |r|_s > 1, else the trajectory end time."""
    if not traj:
        return 0.0
    for es in traj:
        if sobolev_norm(es.r, es.params.sobolev_index) > 1.0:
            return es.t
    return traj[-1].t

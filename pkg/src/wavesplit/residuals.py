"""Residuals left when one-way model solutions are inserted into the
two-directional equation.

``defining_residual`` evaluates the defect directly,

    f = w_tt - w_xx - delta^2 w_xxtt - eps (w^2)_xx,

while ``residual_model`` evaluates its x-antiderivative F (so f = F_x)
from the closed-form expansion per family.  The two routes are
algebraically identical for model solutions and agree to roundoff; tests
exploit that as an equivalence oracle.

Right-moving CH form (P = w_x^2 + 2 w w_xx, G = 3 w_xxx + 5 w_xxt):

    F = eps^2 (w^3/3)_x
        - (1/8) eps^2 delta^2 [ 3 w P_x - 3 w (w^2)_xxx
                                + 2 w_xx (w^2)_x + w_x (w^2)_xx ]
        + (1/16) delta^4 (Dx Dt - 3 Dx^2) G
        + (1/32) eps delta^4 [ 3 (Dx^2 Dt - 3 Dx^3) P
                               + 2 (-3 w Dx^2 + 2 w_xx + w_x Dx) G ]
        + (1/32) eps^2 delta^4 (-9 w Dx^3 + 6 w_xx Dx + 3 w_x Dx^2) P

Right-moving BBM form:

    F = eps^2 (w^3/3)_x
        - (1/4) eps delta^2 (6 w w_xxt + 2 w_x w_xt + w_t w_xx - 9 w_x w_xx)
        + (1/16) delta^4 Dx^3 (5 w_tt - 12 w_xt - 9 w_xx)

Right-moving KDV form:

    F = Dx { (1/3) eps^2 w^3 + (1/4) eps delta^2 (-3 w_x^2 + 4 (w w_x)_t)
             + (1/4) delta^4 (-w_xxxx + 2 w_xxxt) }

Left-moving forms substitute t -> -t, which flips the sign of every term
odd in Dt; operationally each formula is evaluated with w_t negated
(w_tt is even under the substitution and enters unchanged).

Time derivatives are expanded by product rule before discretization and
taken from the model equation, never from finite differences:

    w_t            = model right-hand side
    w_tt           = linearized right-hand side applied to w_t
    w_xt, w_xxt    = Dx w_t, Dx^2 w_t
    P_t            = 2 w_x w_xt + 2 w_t w_xx + 2 w w_xxt
    G_t            = 3 Dx^3 w_t + 5 Dx^2 w_tt
    (w w_x)_t      = w_t w_x + w w_xt
"""

from dataclasses import dataclass

from wavesplit.errors import (
    BlownUpFieldError,
    FamilyMismatchError,
    GridMismatchError,
    TimeMismatchError,
)
from wavesplit.families import LEFT
from wavesplit.grid import Field
from wavesplit.solvers import WaveState, model_rhs, model_second_time_derivative
from wavesplit.spectral import (
    dealias,
    dealiased_product,
    sobolev_norm,
    spectral_derivative,
)

_TIME_TOL = 1e-9


def defining_residual(state: WaveState) -> Field:
    """f = w_tt - w_xx - delta^2 w_xxtt - eps (w^2)_xx, evaluated directly.

    Returned dealiased: above the 2/3 cutoff the masked dynamics carry no
    signal, only derivative-amplified roundoff.
    """
    w = state.w
    eps, delta = state.params.epsilon, state.params.delta
    wtt = model_second_time_derivative(state)
    return dealias(
        wtt
        - spectral_derivative(w, 2)
        - spectral_derivative(wtt, 2) * delta**2
        - spectral_derivative(dealiased_product(w, w), 2) * eps
    )


def _mul(a: Field, b: Field) -> Field:
    return dealiased_product(a, b)


def _ch_antiderivative(w, wt, wtt, eps, delta) -> Field:
    dx = spectral_derivative
    wx, wxx, wxxx = dx(w, 1), dx(w, 2), dx(w, 3)
    wxt, wxxt = dx(wt, 1), dx(wt, 2)
    w2 = _mul(w, w)
    w3 = _mul(w2, w)
    p = _mul(wx, wx) + _mul(w, wxx) * 2.0
    p_t = (_mul(wx, wxt) + _mul(wt, wxx) + _mul(w, wxxt)) * 2.0
    g = wxxx * 3.0 + wxxt * 5.0
    g_t = dx(wt, 3) * 3.0 + dx(wtt, 2) * 5.0

    t1 = dx(w3, 1) * (eps**2 / 3.0)
    t2 = (
        _mul(w, dx(p, 1)) * 3.0
        - _mul(w, dx(w2, 3)) * 3.0
        + _mul(wxx, dx(w2, 1)) * 2.0
        + _mul(wx, dx(w2, 2))
    ) * (-(eps**2) * delta**2 / 8.0)
    t3 = (dx(g_t, 1) - dx(g, 2) * 3.0) * (delta**4 / 16.0)
    t4 = (
        (dx(p_t, 2) - dx(p, 3) * 3.0) * 3.0
        + (_mul(w, dx(g, 2)) * -3.0 + _mul(wxx, g) * 2.0 + _mul(wx, dx(g, 1))) * 2.0
    ) * (eps * delta**4 / 32.0)
    t5 = (
        _mul(w, dx(p, 3)) * -9.0
        + _mul(wxx, dx(p, 1)) * 6.0
        + _mul(wx, dx(p, 2)) * 3.0
    ) * (eps**2 * delta**4 / 32.0)
    return t1 + t2 + t3 + t4 + t5


def _bbm_antiderivative(w, wt, wtt, eps, delta) -> Field:
    dx = spectral_derivative
    wx, wxx = dx(w, 1), dx(w, 2)
    wxt, wxxt = dx(wt, 1), dx(wt, 2)
    w3 = _mul(_mul(w, w), w)
    t1 = dx(w3, 1) * (eps**2 / 3.0)
    t2 = (
        _mul(w, wxxt) * 6.0
        + _mul(wx, wxt) * 2.0
        + _mul(wt, wxx)
        - _mul(wx, wxx) * 9.0
    ) * (-eps * delta**2 / 4.0)
    t3 = dx(wtt * 5.0 - wxt * 12.0 - wxx * 9.0, 3) * (delta**4 / 16.0)
    return t1 + t2 + t3


def _kdv_antiderivative(w, wt, wtt, eps, delta) -> Field:
    dx = spectral_derivative
    wx = dx(w, 1)
    inner = (
        _mul(_mul(w, w), w) * (eps**2 / 3.0)
        + (_mul(wx, wx) * -3.0 + (_mul(wt, wx) + _mul(w, dx(wt, 1))) * 4.0)
        * (eps * delta**2 / 4.0)
        + (dx(w, 4) * -1.0 + dx(wt, 3) * 2.0) * (delta**4 / 4.0)
    )
    return dx(inner, 1)


_BUILDERS = {
    "CH": _ch_antiderivative,
    "BBM": _bbm_antiderivative,
    "KDV": _kdv_antiderivative,
}


def residual_model(state: WaveState) -> Field:
    """Antiderivative F of the defect for this snapshot's family."""
    if not state.w.is_finite:
        raise BlownUpFieldError(f"non-finite field at t={state.t}")
    wt = model_rhs(state)
    wtt = model_second_time_derivative(state)
    if state.family.direction == LEFT:
        wt = -wt
    builder = _BUILDERS[state.family.tag]
    return dealias(
        builder(state.w, wt, wtt, state.params.epsilon, state.params.delta)
    )


@dataclass(frozen=True)
class ResidualReport:
    """Residuals of a counter-propagating pair plus their interaction.

    f_tilde = f_plus + f_minus - interaction with
    interaction = 2 eps (w+ w-)_x; norms are H^s at the snapshot's s.
    """

    f_plus: Field
    f_minus: Field
    interaction: Field
    f_tilde: Field
    norm_plus: float
    norm_minus: float
    norm_tilde: float

    @property
    def norms(self) -> tuple[float, float, float]:
        return self.norm_plus, self.norm_minus, self.norm_tilde


def residual_tilde(wp: WaveState, wm: WaveState) -> ResidualReport:
    """Assemble the combined residual report for a matched pair."""
    if wp.w.grid != wm.w.grid:
        raise GridMismatchError("pair on different grids")
    if abs(wp.t - wm.t) > _TIME_TOL * max(1.0, abs(wp.t)):
        raise TimeMismatchError(f"snapshot times differ: {wp.t} vs {wm.t}")
    if wp.family.tag != wm.family.tag or wp.family.direction != -wm.family.direction:
        raise FamilyMismatchError(
            f"need opposite directions of one family, got "
            f"{wp.family.label}/{wm.family.label}"
        )
    eps = wp.params.epsilon
    s = wp.params.sobolev_index
    f_plus = residual_model(wp)
    f_minus = residual_model(wm)
    interaction = spectral_derivative(dealiased_product(wp.w, wm.w), 1) * (2.0 * eps)
    f_tilde = f_plus + f_minus - interaction
    return ResidualReport(
        f_plus=f_plus,
        f_minus=f_minus,
        interaction=interaction,
        f_tilde=f_tilde,
        norm_plus=sobolev_norm(f_plus, s),
        norm_minus=sobolev_norm(f_minus, s),
        norm_tilde=sobolev_norm(f_tilde, s),
    )

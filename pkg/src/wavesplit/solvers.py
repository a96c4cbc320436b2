"""Method-of-lines solvers for the two-directional equation and the three
one-way model families.

All six model equations share the divergence form

    w_t = -direction * Q * Dx[ w + (eps/2) w^2 + c_xx w_xx
                               + c_nl ((1/2) w_x^2 + w w_xx) ]

with (Q, c_xx, c_nl) per family:

    CH :  Q = (1 - (5/4) delta^2 Dx^2)^-1,  c_xx = -(3/4) delta^2,
          c_nl = -(3/4) eps delta^2
    BBM:  same Q and c_xx, c_nl = 0
    KDV:  Q = 1, c_xx = +(1/2) delta^2, c_nl = 0

(the cubic-gradient terms enter through the identity
2 w_x w_xx + w w_xxx = Dx((1/2) w_x^2 + w w_xx), keeping the full
right-hand side a perfect x-derivative, so the mean is conserved exactly).

The two-directional equation integrates (u, p=u_t) with
u_tt = (1 - delta^2 Dx^2)^-1 Dx^2 (u + eps u^2).

CH/BBM use classical RK4 (their regularized symbols stay bounded); KDV
uses integrating-factor RK4 to sidestep the unregularized third
derivative.  Blow-up: non-finite spectra abort on any step, the L-inf cap
is checked at snapshot times.
"""

from dataclasses import dataclass

import numpy as np

from wavesplit.backend import kernels as K
from wavesplit.errors import BlowUpError, StepSizeError
from wavesplit.families import ModelFamily
from wavesplit.grid import Field, PeriodicGrid
from wavesplit.params import PhysParams
from wavesplit.spectral import (
    derivative_symbol,
    helmholtz_inverse_symbol,
    linf_norm,
    spectral_derivative,
    transform,
)
from wavesplit.stepping import IFRK4, RK4, StepControl, ifrk4_step, rk4_step

BLOWUP_CAP = 1e6


def blowup_check(f: Field, cap: float = BLOWUP_CAP) -> bool:
    """True iff the field is non-finite or exceeds the L-inf cap."""
    if not f.is_finite:
        return True
    return linf_norm(f) > cap


@dataclass(frozen=True)
class WaveState:
    """Model-equation snapshot."""

    w: Field
    t: float
    params: PhysParams
    family: ModelFamily


@dataclass(frozen=True)
class IBState:
    """Two-directional-equation snapshot: u and p = u_t."""

    u: Field
    p: Field
    t: float
    params: PhysParams


class ModelOperator:
    """Precomputed spectral machinery for one (grid, params, family)."""

    def __init__(self, grid: PeriodicGrid, params: PhysParams, family: ModelFamily):
        self.grid = grid
        self.params = params
        self.family = family
        eps, delta = params.epsilon, params.delta
        xi = grid.rfft_wavenumbers
        self._xi2 = xi**2
        self._d1 = derivative_symbol(grid, 1)
        mask = grid.dealias_mask
        if family.tag == "KDV":
            q = np.ones_like(xi)
            c_xx = 0.5 * delta**2
            self._c_nl = 0.0
        else:
            q = helmholtz_inverse_symbol(grid, delta, 5.0 / 4.0)
            c_xx = -0.75 * delta**2
            self._c_nl = -0.75 * eps * delta**2 if family.tag == "CH" else 0.0
        outer = -family.direction * self._d1 * q
        # symbols folding the bracket assembly (dealias mask included on
        # the product channels)
        self._sym_lin = outer * (1.0 - c_xx * self._xi2)
        self._sym_sq = outer * (0.5 * eps) * mask
        self._sym_sq_lin = outer * eps * mask  # linearized: eps*(w*v)
        self._sym_flux = outer * self._c_nl * mask

    # -- right-hand sides on spectra --------------------------------------

    def rhs_hat(self, wh: np.ndarray) -> np.ndarray:
        grid = self.grid
        w = np.fft.irfft(wh, n=grid.n_points)
        if self._c_nl != 0.0:
            wx = np.fft.irfft(self._d1 * wh, n=grid.n_points)
            wxx = np.fft.irfft(-self._xi2 * wh, n=grid.n_points)
            sq, flux = K.quad_products(w, wx, wxx)
            return K.combine3(wh, self._sym_lin, np.fft.rfft(sq), self._sym_sq,
                              np.fft.rfft(flux), self._sym_flux)
        return K.combine2(wh, self._sym_lin, np.fft.rfft(w * w), self._sym_sq)

    def rhs_linearized_hat(self, wh: np.ndarray, vh: np.ndarray) -> np.ndarray:
        """Directional derivative of rhs_hat at wh along vh (exact product
        rule; with vh = w_t this is the second time derivative)."""
        grid = self.grid
        w = np.fft.irfft(wh, n=grid.n_points)
        v = np.fft.irfft(vh, n=grid.n_points)
        if self._c_nl != 0.0:
            wx = np.fft.irfft(self._d1 * wh, n=grid.n_points)
            wxx = np.fft.irfft(-self._xi2 * wh, n=grid.n_points)
            vx = np.fft.irfft(self._d1 * vh, n=grid.n_points)
            vxx = np.fft.irfft(-self._xi2 * vh, n=grid.n_points)
            flux_lin = wx * vx + v * wxx + w * vxx
            return K.combine3(vh, self._sym_lin, np.fft.rfft(w * v), self._sym_sq_lin,
                              np.fft.rfft(flux_lin), self._sym_flux)
        return K.combine2(vh, self._sym_lin, np.fft.rfft(w * v), self._sym_sq_lin)

    def linear_symbol(self) -> np.ndarray:
        """Per-mode symbol of the linearization at w=0 (for IFRK4)."""
        return self._sym_lin

    def nonlinear_hat(self, wh: np.ndarray) -> np.ndarray:
        """rhs minus its linear part (IFRK4 splitting)."""
        grid = self.grid
        w = np.fft.irfft(wh, n=grid.n_points)
        if self._c_nl != 0.0:
            wx = np.fft.irfft(self._d1 * wh, n=grid.n_points)
            wxx = np.fft.irfft(-self._xi2 * wh, n=grid.n_points)
            sq, flux = K.quad_products(w, wx, wxx)
            return K.combine2(np.fft.rfft(sq), self._sym_sq,
                              np.fft.rfft(flux), self._sym_flux)
        return self._sym_sq * np.fft.rfft(w * w)


# -- public operations --------------------------------------------------------

def model_rhs(state: WaveState) -> Field:
    """Exact-in-model time derivative w_t of a snapshot."""
    op = ModelOperator(state.w.grid, state.params, state.family)
    if not state.w.is_finite:
        raise BlowUpError(state.t, "non-finite field handed to model_rhs")
    return Field(state.w.grid, np.fft.irfft(op.rhs_hat(transform(state.w)),
                                            n=state.w.grid.n_points))


def model_time_derivative(state: WaveState) -> Field:
    """Public alias of model_rhs for snapshot bookkeeping."""
    return model_rhs(state)


def model_second_time_derivative(state: WaveState) -> Field:
    """w_tt obtained by differentiating the model equation in time."""
    op = ModelOperator(state.w.grid, state.params, state.family)
    wh = transform(state.w)
    wth = op.rhs_hat(wh)
    return Field(state.w.grid, np.fft.irfft(op.rhs_linearized_hat(wh, wth),
                                            n=state.w.grid.n_points))


def dt_cap(grid: PeriodicGrid, params: PhysParams, kind: str) -> float:
    """Empirical stability caps: min(0.5 dx, 0.25 delta) for the RK4
    solvers, 0.5 dx for integrating-factor KDV."""
    if kind == "kdv":
        return 0.5 * grid.dx
    if kind in ("model", "ib"):
        return min(0.5 * grid.dx, 0.25 * params.delta)
    raise ValueError(f"unknown kind {kind!r}")


def default_control(grid: PeriodicGrid, params: PhysParams, t_end: float,
                    family: ModelFamily | None = None,
                    n_snapshots: int = 11) -> StepControl:
    """StepControl at the default dt rule; family=None means the
    two-directional solver."""
    if family is not None and family.tag == "KDV":
        return StepControl.uniform(t_end, dt_cap(grid, params, "kdv"),
                                   scheme=IFRK4, n_snapshots=n_snapshots)
    kind = "model" if family is not None else "ib"
    return StepControl.uniform(t_end, dt_cap(grid, params, kind),
                               scheme=RK4, n_snapshots=n_snapshots)


def _check_control(ctrl: StepControl, grid, params, family: ModelFamily | None):
    if family is not None and family.tag == "KDV":
        if ctrl.scheme != IFRK4:
            raise StepSizeError("KDV requires the IFRK4 scheme")
        cap = dt_cap(grid, params, "kdv")
    else:
        if ctrl.scheme != RK4:
            raise StepSizeError("CH/BBM and the two-directional solver use RK4")
        cap = dt_cap(grid, params, "model" if family is not None else "ib")
    if ctrl.dt > cap * (1 + 1e-12):
        raise StepSizeError(f"dt={ctrl.dt:.3e} exceeds stability cap {cap:.3e}")


def model_solve(w0: Field, params: PhysParams, family: ModelFamily,
                ctrl: StepControl | None = None, t_end: float | None = None,
                blowup_cap: float = BLOWUP_CAP) -> list[WaveState]:
    """Integrate one model equation; snapshots at stride multiples of dt."""
    grid = w0.grid
    if ctrl is None:
        if t_end is None:
            raise ValueError("provide ctrl or t_end")
        ctrl = default_control(grid, params, t_end, family)
    _check_control(ctrl, grid, params, family)
    op = ModelOperator(grid, params, family)
    wh = transform(w0)
    dt = ctrl.dt

    if ctrl.scheme == IFRK4:
        lam = op.linear_symbol()
        e_half = np.exp(0.5 * dt * lam)
        e_full = e_half * e_half
        e_full_dt = dt * e_half
        step = lambda y: ifrk4_step(y, op.nonlinear_hat, e_half, e_full, e_full_dt, dt)
    else:
        step = lambda y: rk4_step(y, op.rhs_hat, dt)

    def snapshot(y, t):
        f = Field(grid, np.fft.irfft(y, n=grid.n_points))
        if blowup_check(f, blowup_cap):
            raise BlowUpError(t)
        return WaveState(w=f, t=t, params=params, family=family)

    out = [snapshot(wh, 0.0)]
    for n in range(1, ctrl.n_steps + 1):
        wh = step(wh)
        if not np.isfinite(wh).all():
            raise BlowUpError(n * dt)
        if n % ctrl.snapshot_stride == 0 or n == ctrl.n_steps:
            out.append(snapshot(wh, n * dt))
    return out


class IBOperator:
    """Spectral right-hand side of the two-directional equation."""

    def __init__(self, grid: PeriodicGrid, params: PhysParams):
        self.grid = grid
        xi2 = grid.rfft_wavenumbers**2
        hinv = 1.0 / (1.0 + params.delta**2 * xi2)
        self._sym_u = (-xi2 * hinv).astype(complex)
        self._sym_sq = self._sym_u * params.epsilon * grid.dealias_mask

    def accel_hat(self, uh: np.ndarray) -> np.ndarray:
        u = np.fft.irfft(uh, n=self.grid.n_points)
        return K.combine2(uh, self._sym_u, np.fft.rfft(u * u), self._sym_sq)


def ib_rhs(state: IBState) -> tuple[Field, Field]:
    """(u_t, u_tt) of a snapshot: u_tt = (1-d^2 Dx^2)^-1 Dx^2(u + eps u^2)."""
    if not (state.u.is_finite and state.p.is_finite):
        raise BlowUpError(state.t, "non-finite field handed to ib_rhs")
    op = IBOperator(state.u.grid, state.params)
    acc = np.fft.irfft(op.accel_hat(transform(state.u)), n=state.u.grid.n_points)
    return state.p, Field(state.u.grid, acc)


def ib_solve_from_velocity(u0: Field, u1: Field, params: PhysParams,
                           ctrl: StepControl | None = None,
                           t_end: float | None = None,
                           blowup_cap: float = BLOWUP_CAP) -> list[IBState]:
    """Integrate with explicit initial velocity u_t(.,0) = u1."""
    grid = u0.grid
    if ctrl is None:
        if t_end is None:
            raise ValueError("provide ctrl or t_end")
        ctrl = default_control(grid, params, t_end)
    _check_control(ctrl, grid, params, None)
    op = IBOperator(grid, params)
    dt = ctrl.dt
    uh, ph = transform(u0), transform(u1)

    def rhs(y):
        # y stacks (u_hat, p_hat)
        out = np.empty_like(y)
        out[0] = y[1]
        out[1] = op.accel_hat(y[0])
        return out

    y = np.stack([uh, ph])

    def snapshot(y, t):
        u = Field(grid, np.fft.irfft(y[0], n=grid.n_points))
        p = Field(grid, np.fft.irfft(y[1], n=grid.n_points))
        if blowup_check(u, blowup_cap) or blowup_check(p, blowup_cap):
            raise BlowUpError(t)
        return IBState(u=u, p=p, t=t, params=params)

    out = [snapshot(y, 0.0)]
    for n in range(1, ctrl.n_steps + 1):
        y = rk4_step(y, rhs, dt)
        if not np.isfinite(y).all():
            raise BlowUpError(n * dt)
        if n % ctrl.snapshot_stride == 0 or n == ctrl.n_steps:
            out.append(snapshot(y, n * dt))
    return out


def ib_solve(u0: Field, v0: Field, params: PhysParams,
             ctrl: StepControl | None = None, t_end: float | None = None,
             blowup_cap: float = BLOWUP_CAP) -> list[IBState]:
    """Integrate with u_t(.,0) = (v0)_x."""
    return ib_solve_from_velocity(u0, spectral_derivative(v0, 1), params,
                                  ctrl=ctrl, t_end=t_end, blowup_cap=blowup_cap)

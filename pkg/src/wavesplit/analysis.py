"""From solver snapshots to error variables.

The two-directional solution u is compared with the sum of the two
one-way solutions through r = u - (w+ + w-) and its mean-zero
antiderivative rho (r = rho_x).  Initial data split as
w0+ = (u0 - v0)/2, w0- = (u0 + v0)/2, so r(.,0) = 0, and the initial
rho_t has the closed form

    rho_t(.,0) = Q { -(delta^2/2) v0_xx - (eps/2) u0 v0
                     - (3/8) eps delta^2 (u0_x v0_x - (u0 v0)_xx) }

with Q = (1 - (5/4) delta^2 Dx^2)^-1; r_t(.,0) is its x-derivative.
"""

from dataclasses import dataclass

from wavesplit.errors import FamilyMismatchError, GridMismatchError, TimeMismatchError
from wavesplit.grid import Field
from wavesplit.params import PhysParams
from wavesplit.solvers import IBState, WaveState, model_rhs
from wavesplit.spectral import (
    antiderivative,
    apply_helmholtz_inverse,
    dealiased_product,
    spectral_derivative,
)

TIME_TOL = 1e-9


def split_initial_data(u0: Field, v0: Field) -> tuple[Field, Field]:
    """(w0+, w0-) = ((u0 - v0)/2, (u0 + v0)/2); the halves re-sum to u0."""
    if u0.grid != v0.grid:
        raise GridMismatchError("initial data on different grids")
    w_plus = Field(u0.grid, 0.5 * u0.values - 0.5 * v0.values)
    w_minus = Field(u0.grid, 0.5 * u0.values + 0.5 * v0.values)
    return w_plus, w_minus


def initial_rho_t(u0: Field, v0: Field, params: PhysParams) -> Field:
    """Closed-form rho_t(., 0) for split data (see module docstring).

    Returned in the mean-zero gauge: rho is fixed only up to a constant,
    and the package pins mean(rho(t)) = 0 for all t, hence mean(rho_t) = 0.
    """
    if u0.grid != v0.grid:
        raise GridMismatchError("initial data on different grids")
    eps, delta = params.epsilon, params.delta
    uv = dealiased_product(u0, v0)
    bracket = (
        spectral_derivative(v0, 2) * (-0.5 * delta**2)
        + uv * (-0.5 * eps)
        + (dealiased_product(spectral_derivative(u0, 1), spectral_derivative(v0, 1))
           - spectral_derivative(uv, 2)) * (-0.375 * eps * delta**2)
    )
    out = apply_helmholtz_inverse(bracket, delta, 5.0 / 4.0)
    return Field(out.grid, out.values - out.mean())


def initial_r_t(u0: Field, v0: Field, params: PhysParams) -> Field:
    """r_t(., 0) = Dx rho_t(., 0)."""
    return spectral_derivative(initial_rho_t(u0, v0, params), 1)


@dataclass(frozen=True)
class ErrorState:
    """Error variables (r, rho, r_t, rho_t) at one snapshot time."""

    r: Field
    rho: Field
    r_t: Field
    rho_t: Field
    t: float
    params: PhysParams


def error_state(ib: IBState, wp: WaveState, wm: WaveState) -> ErrorState:
    """Assemble the error variables from matched snapshots.

    r_t uses the exact-in-model time derivatives (never finite
    differences); rho, rho_t are mean-zero antiderivatives, which is
    where degraded mass conservation would surface as an error.
    """
    grid = ib.u.grid
    if wp.w.grid != grid or wm.w.grid != grid:
        raise GridMismatchError("snapshots on different grids")
    times = (ib.t, wp.t, wm.t)
    if max(times) - min(times) > TIME_TOL * max(1.0, abs(ib.t)):
        raise TimeMismatchError(f"snapshot times differ: {times}")
    if wp.family.tag != wm.family.tag or wp.family.direction != -wm.family.direction:
        raise FamilyMismatchError(
            f"need opposite directions of one family, got "
            f"{wp.family.label}/{wm.family.label}"
        )
    r = ib.u - wp.w - wm.w
    r_t = ib.p - model_rhs(wp) - model_rhs(wm)
    return ErrorState(
        r=r,
        rho=antiderivative(r),
        r_t=r_t,
        rho_t=antiderivative(r_t),
        t=ib.t,
        params=ib.params,
    )

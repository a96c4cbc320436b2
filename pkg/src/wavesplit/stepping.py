"""Time-step control and the RK4 / integrating-factor RK4 stage updates."""

import math
from dataclasses import dataclass

from wavesplit.backend import kernels as K

RK4 = "RK4"
IFRK4 = "IFRK4"
SCHEMES = (RK4, IFRK4)


@dataclass(frozen=True)
class StepControl:
    """Fixed-step integration plan with snapshot cadence."""

    dt: float
    scheme: str
    t_end: float
    snapshot_stride: int

    def __post_init__(self):
        if self.dt <= 0 or self.t_end <= 0:
            raise ValueError("dt and t_end must be positive")
        if self.snapshot_stride < 1:
            raise ValueError("snapshot_stride must be >= 1")
        if self.scheme not in SCHEMES:
            raise ValueError(f"scheme must be one of {SCHEMES}")
        if self.n_steps < 1:
            raise ValueError("t_end shorter than one step")

    @property
    def n_steps(self) -> int:
        return max(1, round(self.t_end / self.dt))

    @classmethod
    def uniform(cls, t_end: float, dt_cap: float, scheme: str = RK4,
                n_snapshots: int = 11) -> "StepControl":
        """Largest dt <= dt_cap giving n_snapshots uniformly spaced
        snapshots (t=0 included) that land exactly on t_end."""
        if n_snapshots < 2:
            raise ValueError("need at least 2 snapshots")
        intervals = n_snapshots - 1
        stride = max(1, math.ceil(t_end / intervals / dt_cap))
        dt = t_end / (stride * intervals)
        return cls(dt=dt, scheme=scheme, t_end=t_end, snapshot_stride=stride)


def rk4_step(y, rhs, dt):
    k1 = rhs(y)
    k2 = rhs(K.axpy(y, 0.5 * dt, k1))
    k3 = rhs(K.axpy(y, 0.5 * dt, k2))
    k4 = rhs(K.axpy(y, dt, k3))
    return K.rk4_combine(y, k1, k2, k3, k4, dt)


def ifrk4_step(y, nonlinear, e_half, e_full, e_full_dt, dt):
    """One step of RK4 after exact propagation of the linear part.

    e_half/e_full are exp(lambda*dt/2), exp(lambda*dt) per mode;
    e_full_dt is dt*e_half (precomputed).
    """
    n1 = nonlinear(y)
    n2 = nonlinear(e_half * K.axpy(y, 0.5 * dt, n1))
    n3 = nonlinear(K.combine2s(y, e_half, n2, 0.5 * dt))
    n4 = nonlinear(K.combine2(y, e_full, n3, e_full_dt))
    return K.ifrk4_combine(y, e_full, e_half, n1, n2, n3, n4, dt)

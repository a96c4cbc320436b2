"""Physical parameters: nonlinearity, dispersion, Sobolev index."""

from dataclasses import dataclass


@dataclass(frozen=True)
class PhysParams:
    """(epsilon, delta, s) with 0 < epsilon <= delta <= 1 and s > 1/2."""

    epsilon: float
    delta: float
    sobolev_index: float = 2.0

    def __post_init__(self):
        if not 0.0 < self.epsilon <= self.delta <= 1.0:
            raise ValueError(
                f"need 0 < epsilon <= delta <= 1, got "
                f"epsilon={self.epsilon}, delta={self.delta}"
            )
        if not self.sobolev_index > 0.5:
            raise ValueError(f"need sobolev_index > 1/2, got {self.sobolev_index}")

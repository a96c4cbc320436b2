"""Exception types shared across the package."""


class WaveSplitError(Exception):
    """Base class for package errors."""


class GridMismatchError(WaveSplitError):
    """Fields combined across different periodic grids."""


class BlownUpFieldError(WaveSplitError):
    """Operation received a field with NaN/Inf samples."""


class NonzeroMeanError(WaveSplitError):
    """Antiderivative requested for a field whose mean is not zero."""


class TimeMismatchError(WaveSplitError):
    """Snapshots combined at different clock times."""


class FamilyMismatchError(WaveSplitError):
    """State handed to an operator built for a different model family."""


class StepSizeError(WaveSplitError):
    """Time step exceeds the stability cap for the scheme/family."""


class EnergyRegimeError(WaveSplitError):
    """Energy functional went negative (outside the small-amplitude regime)."""


class BlowUpError(WaveSplitError):
    """Solver hit the blow-up criterion; carries the abort time."""

    def __init__(self, time: float, message: str = ""):
        self.time = time
        super().__init__(message or f"blow-up detected at t={time:.6g}")


class ConfigError(WaveSplitError):
    """Malformed or inconsistent experiment configuration."""

"""wavesplit: pseudospectral laboratory for splitting bidirectional long
waves into counter-propagating one-way model waves (CH / BBM / KDV) and
measuring how well the sum tracks the parent equation."""

from wavesplit._version import __version__
from wavesplit.backend import BACKEND
from wavesplit.families import LEFT, RIGHT, ModelFamily
from wavesplit.grid import Field, PeriodicGrid, zero_field
from wavesplit.params import PhysParams

__all__ = [
    "__version__",
    "BACKEND",
    "Field",
    "PeriodicGrid",
    "PhysParams",
    "ModelFamily",
    "RIGHT",
    "LEFT",
    "zero_field",
]

"""The laboratory's environments: deterministic-given-seed state machines."""

from .base import Environment, StepResult
from .corridor import AlternatingCorridor, CorridorSpec
from .grid import GridSpec, MultiRoomGrid
from .lock import DiabolicalLock, LockSpec, hadamard_orthonormal, lock_observe, next_power_of_two

__all__ = [
    "AlternatingCorridor", "CorridorSpec", "DiabolicalLock", "Environment",
    "GridSpec", "LockSpec", "MultiRoomGrid", "StepResult",
    "hadamard_orthonormal", "lock_observe", "next_power_of_two",
]

"""Common environment protocol and episodic position-count tracking."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Hashable, Optional

import numpy as np

from ..errors import UsageError


@dataclass
class StepResult:
    """One transition's worth of learner-facing data.

    ``info`` carries ground-truth state identifiers (lock column, grid
    position, ...) for evaluation only; it never reaches the learner except
    through an explicitly count-based bonus.
    """

    observation: np.ndarray
    extrinsic_reward: float
    terminated: bool
    truncated: bool
    info: dict[str, Any] = field(default_factory=dict)


class Environment:
    """Single-threaded, deterministic-given-stream environment."""

    observation_dim: int
    action_count: int

    def __init__(self, track_counts: bool = False):
        self._track_counts = track_counts
        self._counts: dict[Hashable, int] = {}
        self._position: Optional[Hashable] = None

    # -- episodic position counts -------------------------------------
    def _begin_episode_counts(self, position: Hashable) -> None:
        self._position = position
        self._counts = {position: 1} if self._track_counts else {}

    def _occupy(self, position: Optional[Hashable]) -> None:
        """Record one occupancy step; turning in place counts again."""
        self._position = position
        if self._track_counts and position is not None:
            self._counts[position] = self._counts.get(position, 0) + 1

    def episodic_count(self) -> int:
        """Occupancies of the current position this episode, including now."""
        if not self._track_counts:
            raise UsageError("episodic counts are not enabled for this environment")
        if self._position is None:
            return 1
        return self._counts[self._position]

    # -- protocol ------------------------------------------------------
    def reset(self) -> StepResult:
        raise NotImplementedError

    def step(self, action: int) -> StepResult:
        raise NotImplementedError

    def render_ascii(self) -> str:
        return f"<{type(self).__name__}>"

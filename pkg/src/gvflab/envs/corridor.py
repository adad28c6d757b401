"""Alternating-tile corridor: a reward-free POMDP with a late pattern break.

Tiles alternate between two colours until ``surprise_start``, after which
every remaining tile is the constant colour 1 ("blue"). The agent observes
only the colour of the tile it stands on and advances one tile per step no
matter which action it takes, so the only interesting signal here is the
intrinsic reward trace.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ConfigError, UsageError
from .base import Environment, StepResult


@dataclass(frozen=True)
class CorridorSpec:
    length: int = 1000
    surprise_start: int = 990

    def __post_init__(self):
        if self.length < 2:
            raise ConfigError(f"corridor length must be >= 2, got {self.length}")
        if not 1 <= self.surprise_start < self.length:
            raise ConfigError(
                f"surprise_start must lie in [1, {self.length - 1}], got {self.surprise_start}"
            )


class AlternatingCorridor(Environment):
    observation_dim = 2
    action_count = 2  # actions are accepted but never alter the walk

    def __init__(self, spec: CorridorSpec, track_counts: bool = False):
        super().__init__(track_counts)
        self.spec = spec
        self._pos = 0
        self._done = True

    def tile_colour(self, i: int) -> int:
        return i % 2 if i < self.spec.surprise_start else 1

    def _observe(self) -> np.ndarray:
        obs = np.zeros(2, dtype=np.float32)
        obs[self.tile_colour(self._pos)] = 1.0
        return obs

    def reset(self) -> StepResult:
        self._pos = 0
        self._done = False
        self._begin_episode_counts(0)
        return StepResult(self._observe(), 0.0, False, False, {"tile": 0})

    def step(self, action: int) -> StepResult:
        if self._done:
            raise UsageError("corridor episode is over; call reset()")
        if not 0 <= action < self.action_count:
            raise UsageError(f"action {action} out of range [0, {self.action_count})")
        self._pos += 1
        self._occupy(self._pos)
        truncated = self._pos == self.spec.length - 1
        self._done = truncated
        return StepResult(self._observe(), 0.0, False, truncated, {"tile": self._pos})

    def render_ascii(self) -> str:
        marks = ["b" if self.tile_colour(i) else "w" for i in range(self.spec.length)]
        if not self._done:
            marks[self._pos] = marks[self._pos].upper()
        return "".join(marks)

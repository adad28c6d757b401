"""Diabolical lock: anti-shaped rewards, an absorbing dead row, noisy
Hadamard-rotated observations.

States sit in 3 rows {a, b, c} x H columns. Exactly one action per state is
"good": from a good row it moves to row a or b of the next column with equal
probability at a cost of -1/H, except from column H where it pays the sparse
reward of 10 and terminates. Every other action (and every action from the
dead row c) leads to the dead row with zero reward. Episodes last exactly H
steps.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..diffcore.rng import RngStream
from ..errors import ConfigError, UsageError
from .base import Environment, StepResult

ROW_A, ROW_B, ROW_DEAD = 0, 1, 2


def next_power_of_two(n: int) -> int:
    p = 1
    while p < n:
        p *= 2
    return p


def hadamard_orthonormal(n: int) -> np.ndarray:
    """Sylvester-construction Hadamard matrix of order n, scaled to M^T M = I."""
    if n <= 0 or n & (n - 1):
        raise ConfigError(f"Hadamard order must be a power of two, got {n}")
    h = np.ones((1, 1))
    while h.shape[0] < n:
        h = np.block([[h, h], [h, -h]])
    return (h / np.sqrt(n)).astype(np.float64)


@dataclass
class LockSpec:
    horizon: int = 100
    actions: int = 10
    sigma_o: float = 0.1
    seed: int = 0
    good_action_table: np.ndarray = field(default=None, repr=False)  # (2, H)

    def __post_init__(self):
        if self.horizon < 1 or self.actions < 1:
            raise ConfigError(
                f"lock needs horizon >= 1 and actions >= 1, got {self.horizon}, {self.actions}"
            )
        if self.sigma_o < 0:
            raise ConfigError(f"sigma_o must be >= 0, got {self.sigma_o}")
        if self.good_action_table is None:
            gen = RngStream.from_seed(self.seed).derived("lock/good-actions").generator
            self.good_action_table = gen.integers(
                0, self.actions, size=(2, self.horizon), dtype=np.int64
            )
        self.good_action_table = np.asarray(self.good_action_table)
        if self.good_action_table.shape != (2, self.horizon):
            raise ConfigError(
                f"good_action_table must have shape (2, {self.horizon}), "
                f"got {self.good_action_table.shape}"
            )

    @property
    def raw_obs_dim(self) -> int:
        return 3 + self.horizon

    @property
    def obs_dim(self) -> int:
        return next_power_of_two(self.raw_obs_dim)


def lock_observe(row: int, column: int, spec: LockSpec, rng: np.random.Generator) -> np.ndarray:
    """Noisy one-hot (row, column) encoding, zero-padded and Hadamard-rotated.

    Noise is drawn fresh on every call, including revisits of the same state.
    """
    if not (0 <= row <= 2 and 1 <= column <= spec.horizon):
        raise UsageError(f"invalid lock state (row={row}, column={column})")
    raw = np.zeros(spec.raw_obs_dim)
    raw[row] = 1.0
    raw[3 + column - 1] = 1.0
    if spec.sigma_o > 0:
        raw += rng.normal(0.0, spec.sigma_o, size=spec.raw_obs_dim)
    padded = np.zeros(spec.obs_dim)
    padded[: spec.raw_obs_dim] = raw
    return (hadamard_for(spec.obs_dim) @ padded).astype(np.float32)


_HADAMARD_CACHE: dict[int, np.ndarray] = {}


def hadamard_for(n: int) -> np.ndarray:
    mat = _HADAMARD_CACHE.get(n)
    if mat is None:
        mat = _HADAMARD_CACHE[n] = hadamard_orthonormal(n)
    return mat


class DiabolicalLock(Environment):
    def __init__(self, spec: LockSpec, stream: RngStream, track_counts: bool = False):
        super().__init__(track_counts)
        self.spec = spec
        self._gen = stream.derived("lock/dynamics").generator
        self.observation_dim = spec.obs_dim
        self.action_count = spec.actions
        self._row = ROW_A
        self._col = 1
        self._done = True

    def reset(self) -> StepResult:
        self._row = ROW_A if self._gen.random() < 0.5 else ROW_B
        self._col = 1
        self._done = False
        self._begin_episode_counts((self._row, self._col))
        obs = lock_observe(self._row, self._col, self.spec, self._gen)
        return StepResult(obs, 0.0, False, False, {"row": self._row, "column": self._col})

    def step(self, action: int) -> StepResult:
        if self._done:
            raise UsageError("lock episode is over; call reset()")
        if not 0 <= action < self.spec.actions:
            raise UsageError(f"action {action} out of range [0, {self.spec.actions})")
        h = self.spec.horizon
        row, col = self._row, self._col
        good = row != ROW_DEAD and action == int(self.spec.good_action_table[row, col - 1])
        if col == h:
            # final step of the episode: the lock ends here whatever happens
            reward = 10.0 if good else 0.0
            self._done = True
            self._occupy(None)
            obs = np.zeros(self.spec.obs_dim, dtype=np.float32)
            return StepResult(obs, reward, True, False, {"completed": good})
        if good:
            reward = -1.0 / h
            self._row = ROW_A if self._gen.random() < 0.5 else ROW_B
        else:
            reward = 0.0
            self._row = ROW_DEAD
        self._col = col + 1
        self._occupy((self._row, self._col))
        obs = lock_observe(self._row, self._col, self.spec, self._gen)
        return StepResult(obs, reward, False, False, {"row": self._row, "column": self._col})

    def render_ascii(self) -> str:
        rows = []
        for r, label in ((ROW_A, "a"), (ROW_B, "b"), (ROW_DEAD, "c")):
            cells = [
                "@" if (not self._done and r == self._row and c == self._col) else "."
                for c in range(1, self.spec.horizon + 1)
            ]
            rows.append(f"{label} " + "".join(cells))
        return "\n".join(rows)

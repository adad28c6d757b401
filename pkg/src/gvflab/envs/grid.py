"""Procedurally generated multi-room gridworld with egocentric views.

Each episode draws a fresh layout: a chain of rectangular rooms connected by
open doorway gaps, the agent starting in the first room and a goal in the
last. The agent sees a ``view_size``-square window in front of it (cells
behind walls masked out), one-hot encoded over cell types; optionally the
panoramic concatenation of the four directional views from its cell.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..diffcore.rng import RngStream
from ..errors import ConfigError, UsageError
from .base import Environment, StepResult

EMPTY, WALL, DOORWAY, GOAL, UNSEEN = 0, 1, 2, 3, 4
N_CELL_TYPES = 5

# orientation: 0=N, 1=E, 2=S, 3=W; grid indexed [x, y] with y growing south
FORWARD = {0: (0, -1), 1: (1, 0), 2: (0, 1), 3: (-1, 0)}
RIGHT = {0: (1, 0), 1: (0, 1), 2: (-1, 0), 3: (0, -1)}

TURN_LEFT, TURN_RIGHT, MOVE_FORWARD = 0, 1, 2


@dataclass(frozen=True)
class GridSpec:
    room_count: int = 4
    max_room_size: int = 5
    min_room_size: int = 4
    view_size: int = 7
    panoramic: bool = False
    max_steps: int = 80

    def __post_init__(self):
        if self.room_count < 2:
            raise ConfigError(f"need at least 2 rooms, got {self.room_count}")
        if not 4 <= self.min_room_size <= self.max_room_size:
            raise ConfigError(
                f"room sizes must satisfy 4 <= min <= max, got "
                f"{self.min_room_size}..{self.max_room_size}"
            )
        if self.view_size < 3 or self.view_size % 2 == 0:
            raise ConfigError(f"view_size must be odd and >= 3, got {self.view_size}")
        if self.max_steps < 1:
            raise ConfigError(f"max_steps must be positive, got {self.max_steps}")

    @property
    def obs_dim(self) -> int:
        per_view = self.view_size * self.view_size * N_CELL_TYPES
        return 4 * per_view if self.panoramic else per_view


@dataclass
class RoomLayout:
    grid: np.ndarray  # (side, side) int8 cell types
    start_pos: tuple[int, int]
    start_orientation: int
    goal_pos: tuple[int, int]
    rooms: list[tuple[int, int, int, int]]  # (x, y, w, h) including walls


def _carve_rooms(spec: GridSpec, gen: np.random.Generator) -> RoomLayout:
    """Chain rooms left-to-random directions with doorway gaps; retry on clashes."""
    side = max(12, spec.room_count * (spec.max_room_size - 1) + 3)
    for _ in range(200):
        rooms: list[tuple[int, int, int, int]] = []
        doors: list[tuple[int, int]] = []
        claimed: set[tuple[int, int]] = set()
        w = int(gen.integers(spec.min_room_size, spec.max_room_size + 1))
        h = int(gen.integers(spec.min_room_size, spec.max_room_size + 1))
        x = int(gen.integers(1, side - w - 1))
        y = int(gen.integers(1, side - h - 1))
        rooms.append((x, y, w, h))
        claimed |= {(i, j) for i in range(x, x + w) for j in range(y, y + h)}
        ok = True
        for _ in range(spec.room_count - 1):
            placed = False
            for _ in range(24):
                px, py, pw, ph = rooms[-1]
                direction = int(gen.integers(0, 4))
                w2 = int(gen.integers(spec.min_room_size, spec.max_room_size + 1))
                h2 = int(gen.integers(spec.min_room_size, spec.max_room_size + 1))
                if direction in (1, 3):  # attach east / west
                    door_y = int(gen.integers(py + 1, py + ph - 1))
                    y2 = door_y - 1 - int(gen.integers(0, h2 - 2))
                    x2 = px + pw - 1 if direction == 1 else px - w2 + 1
                    shared = lambda c: c[0] == (px + pw - 1 if direction == 1 else px)
                    door = ((px + pw - 1) if direction == 1 else px, door_y)
                else:  # attach south / north
                    door_x = int(gen.integers(px + 1, px + pw - 1))
                    x2 = door_x - 1 - int(gen.integers(0, w2 - 2))
                    y2 = py + ph - 1 if direction == 2 else py - h2 + 1
                    shared = lambda c: c[1] == (py + ph - 1 if direction == 2 else py)
                    door = (door_x, (py + ph - 1) if direction == 2 else py)
                if x2 < 1 or y2 < 1 or x2 + w2 > side - 1 or y2 + h2 > side - 1:
                    continue
                cells = {(i, j) for i in range(x2, x2 + w2) for j in range(y2, y2 + h2)}
                if any(not shared(c) for c in cells & claimed):
                    continue
                rooms.append((x2, y2, w2, h2))
                doors.append(door)
                claimed |= cells
                placed = True
                break
            if not placed:
                ok = False
                break
        if not ok:
            continue
        grid = np.full((side, side), WALL, dtype=np.int8)
        for rx, ry, rw, rh in rooms:
            grid[rx + 1 : rx + rw - 1, ry + 1 : ry + rh - 1] = EMPTY
        for dx, dy in doors:
            grid[dx, dy] = DOORWAY
        fx, fy, fw, fh = rooms[-1]
        gx = int(gen.integers(fx + 1, fx + fw - 1))
        gy = int(gen.integers(fy + 1, fy + fh - 1))
        grid[gx, gy] = GOAL
        sx0, sy0, sw, sh = rooms[0]
        sx = int(gen.integers(sx0 + 1, sx0 + sw - 1))
        sy = int(gen.integers(sy0 + 1, sy0 + sh - 1))
        if (sx, sy) == (gx, gy):
            continue
        orientation = int(gen.integers(0, 4))
        return RoomLayout(grid, (sx, sy), orientation, (gx, gy), rooms)
    raise ConfigError(
        f"could not generate a {spec.room_count}-room layout; relax the room sizes"
    )


def _view_offsets(view_size: int) -> dict[int, np.ndarray]:
    """(view, view, 2) world offsets per orientation; agent at bottom-centre."""
    v = view_size
    offsets = {}
    cols, rows = np.meshgrid(np.arange(v), np.arange(v), indexing="ij")
    ahead = (v - 1) - rows
    lateral = cols - v // 2
    for o in range(4):
        fx, fy = FORWARD[o]
        rx, ry = RIGHT[o]
        offsets[o] = np.stack(
            [ahead * fx + lateral * rx, ahead * fy + lateral * ry], axis=-1
        )
    return offsets


_OFFSET_CACHE: dict[int, dict[int, np.ndarray]] = {}


def _visibility_mask(types: np.ndarray) -> np.ndarray:
    """MiniGrid-style light propagation from the agent cell.

    ``types`` is the local (col, row) grid; walls are visible but opaque.
    """
    v = types.shape[0]
    mask = np.zeros((v, v), dtype=bool)
    mask[v // 2, v - 1] = True
    see_through = types != WALL
    for j in range(v - 1, -1, -1):
        for i in range(v - 1):
            if mask[i, j] and see_through[i, j]:
                mask[i + 1, j] = True
                if j > 0:
                    mask[i + 1, j - 1] = True
                    mask[i, j - 1] = True
        for i in range(v - 1, 0, -1):
            if mask[i, j] and see_through[i, j]:
                mask[i - 1, j] = True
                if j > 0:
                    mask[i - 1, j - 1] = True
                    mask[i, j - 1] = True
    return mask


class MultiRoomGrid(Environment):
    def __init__(self, spec: GridSpec, stream: RngStream, track_counts: bool = False):
        super().__init__(track_counts)
        self.spec = spec
        self._stream = stream
        self.observation_dim = spec.obs_dim
        self.action_count = 3
        self._episode = -1
        self._layout: RoomLayout | None = None
        self._pos = (0, 0)
        self._orient = 0
        self._steps = 0
        self._done = True
        self._obs_cache: dict[tuple[int, int, int], np.ndarray] = {}
        if spec.view_size not in _OFFSET_CACHE:
            _OFFSET_CACHE[spec.view_size] = _view_offsets(spec.view_size)
        self._offsets = _OFFSET_CACHE[spec.view_size]

    # -- observation ----------------------------------------------------
    def _single_view(self, pos: tuple[int, int], orient: int) -> np.ndarray:
        grid = self._layout.grid
        side = grid.shape[0]
        coords = self._offsets[orient] + np.array(pos)
        inside = (
            (coords[..., 0] >= 0) & (coords[..., 0] < side)
            & (coords[..., 1] >= 0) & (coords[..., 1] < side)
        )
        types = np.full(coords.shape[:2], WALL, dtype=np.int8)
        cx = np.clip(coords[..., 0], 0, side - 1)
        cy = np.clip(coords[..., 1], 0, side - 1)
        types[inside] = grid[cx, cy][inside]
        visible = _visibility_mask(types) & inside
        types[~visible] = UNSEEN
        onehot = np.zeros((*types.shape, N_CELL_TYPES), dtype=np.float32)
        v = self.spec.view_size
        onehot.reshape(-1, N_CELL_TYPES)[np.arange(v * v), types.reshape(-1)] = 1.0
        return onehot.reshape(-1)

    def _observe(self) -> np.ndarray:
        key = (*self._pos, self._orient if not self.spec.panoramic else -1)
        cached = self._obs_cache.get(key)
        if cached is not None:
            return cached
        if self.spec.panoramic:
            obs = np.concatenate([self._single_view(self._pos, o) for o in range(4)])
        else:
            obs = self._single_view(self._pos, self._orient)
        self._obs_cache[key] = obs
        return obs

    # -- dynamics ---------------------------------------------------------
    def reset(self) -> StepResult:
        self._episode += 1
        gen = self._stream.derived(f"episode/{self._episode}").generator
        self._layout = _carve_rooms(self.spec, gen)
        self._pos = self._layout.start_pos
        self._orient = self._layout.start_orientation
        self._steps = 0
        self._done = False
        self._obs_cache = {}
        self._begin_episode_counts(self._pos)
        return StepResult(
            self._observe(), 0.0, False, False,
            {"position": self._pos, "orientation": self._orient},
        )

    def step(self, action: int) -> StepResult:
        if self._done:
            raise UsageError("grid episode is over; call reset()")
        if not 0 <= action < 3:
            raise UsageError(f"action {action} out of range [0, 3)")
        self._steps += 1
        if action == TURN_LEFT:
            self._orient = (self._orient - 1) % 4
        elif action == TURN_RIGHT:
            self._orient = (self._orient + 1) % 4
        else:
            fx, fy = FORWARD[self._orient]
            nx, ny = self._pos[0] + fx, self._pos[1] + fy
            if self._layout.grid[nx, ny] != WALL:
                self._pos = (nx, ny)
        self._occupy(self._pos)
        reached = self._layout.grid[self._pos] == GOAL
        terminated = bool(reached)
        truncated = not terminated and self._steps >= self.spec.max_steps
        reward = 1.0 - 0.9 * self._steps / self.spec.max_steps if reached else 0.0
        self._done = terminated or truncated
        return StepResult(
            self._observe(), reward, terminated, truncated,
            {"position": self._pos, "orientation": self._orient},
        )

    def render_ascii(self) -> str:
        if self._layout is None:
            return "<unreset grid>"
        chars = {EMPTY: ".", WALL: "#", DOORWAY: "/", GOAL: "G"}
        grid = self._layout.grid
        lines = []
        for yy in range(grid.shape[1]):
            row = []
            for xx in range(grid.shape[0]):
                if (xx, yy) == self._pos and not self._done:
                    row.append("^>v<"[self._orient])
                else:
                    row.append(chars[int(grid[xx, yy])])
            lines.append("".join(row))
        return "\n".join(lines)

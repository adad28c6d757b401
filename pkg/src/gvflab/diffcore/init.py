"""Parameter initializers. Deterministic for a fixed stream."""

from __future__ import annotations

import numpy as np

from ..errors import UsageError
from .rng import RngStream
from .tensor import Tensor

SCHEMES = ("uniform_fan_in", "orthogonal", "normal_scaled")


def init(scheme: str, shape, rng: RngStream, *, fan_in: int | None = None,
         gain: float = 1.0, dtype=np.float32) -> Tensor:
    """Create a parameter tensor under the named scheme.

    ``fan_in`` defaults to ``shape[0]``; pass it explicitly for bias vectors
    that should share their layer's fan-in.
    """
    shape = tuple(int(s) for s in shape)
    if not shape or any(s <= 0 for s in shape):
        raise UsageError(f"invalid parameter shape {shape}")
    gen = rng.generator
    if scheme == "uniform_fan_in":
        fi = shape[0] if fan_in is None else fan_in
        bound = gain / np.sqrt(fi)
        data = gen.uniform(-bound, bound, size=shape)
    elif scheme == "normal_scaled":
        fi = shape[0] if fan_in is None else fan_in
        data = gen.normal(0.0, gain / np.sqrt(fi), size=shape)
    elif scheme == "orthogonal":
        if len(shape) != 2:
            raise UsageError(f"orthogonal init requires a rank-2 shape, got {shape}")
        rows, cols = shape
        a = gen.normal(size=(max(rows, cols), min(rows, cols)))
        q, r = np.linalg.qr(a)
        q = q * np.sign(np.diag(r))  # make the factorization unique
        if rows < cols:
            q = q.T
        data = gain * q[:rows, :cols]
    else:
        raise UsageError(f"unknown init scheme {scheme!r}; choose from {SCHEMES}")
    return Tensor(data.astype(dtype), requires_grad=True)

"""Splittable, label-addressed random streams.

All randomness in the package flows from a single root seed through a tree of
counter-based (Philox) generators. Children are derived by *label*, not by
draw order, so adding a new consumer never perturbs the draws seen by an
existing one.
"""

from __future__ import annotations

import hashlib

import numpy as np


def _label_key(label: str) -> int:
    digest = hashlib.blake2s(label.encode("utf-8"), digest_size=4).digest()
    return int.from_bytes(digest, "little")


class RngStream:
    """One node in the stream tree; wraps a numpy Philox generator."""

    def __init__(self, entropy: int, path: tuple[int, ...] = ()):
        self._entropy = entropy
        self._path = path
        seq = np.random.SeedSequence(entropy=entropy, spawn_key=path)
        self.generator = np.random.Generator(np.random.Philox(seq))

    @classmethod
    def from_seed(cls, seed: int) -> "RngStream":
        return cls(entropy=int(seed))

    def derived(self, label: str) -> "RngStream":
        """Child stream addressed by label; independent of sibling labels."""
        return RngStream(self._entropy, self._path + (_label_key(label),))

    def __repr__(self) -> str:
        return f"RngStream(entropy={self._entropy}, path={self._path})"

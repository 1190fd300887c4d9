"""Seed handling.

Every stochastic routine takes a 64-bit integer seed and builds a
``random.Random`` from it. Independent substreams (replicas, the two
auxiliary streams of a coupled pair, per-block generators) are derived with
``numpy.random.SeedSequence`` so that ``(seed, *path)`` always maps to the
same, statistically independent stream.
"""

from __future__ import annotations

import random

import numpy as np

MASK64 = (1 << 64) - 1


def substream_seed(seed: int, *path: int) -> int:
    """Derive a 64-bit seed for the substream addressed by ``path``."""
    ss = np.random.SeedSequence(entropy=int(seed) & MASK64, spawn_key=tuple(int(p) for p in path))
    lo, hi = ss.generate_state(2, dtype=np.uint32)
    return int(lo) | (int(hi) << 32)


def make_rng(seed: int | random.Random | None, *path: int) -> random.Random:
    """Return a ``random.Random`` for ``seed`` (or pass one through untouched)."""
    if isinstance(seed, random.Random):
        return seed
    if seed is None:
        seed = random.SystemRandom().getrandbits(64)
    return random.Random(substream_seed(seed, *path))

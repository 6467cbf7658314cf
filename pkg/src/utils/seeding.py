"""Counter-based random streams keyed by (master seed, lattice id, trial id)."""

from __future__ import annotations

import numpy as np


def stream_seed(master: int, *key: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(int(master), spawn_key=tuple(int(k) for k in key))


def make_rng(master: int | None = None, *key: int) -> np.random.Generator:
    """Return a Philox generator for the stream ``(master, *key)``.

    The same key always yields the same stream regardless of which worker
    process draws from it or in which order work items are processed.
    """
    if master is None:
        return np.random.Generator(np.random.Philox())
    return np.random.Generator(np.random.Philox(stream_seed(master, *key)))


def as_rng(rng: np.random.Generator | int | None) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return make_rng(rng)

"""Counter-based random streams.

All randomness flows from one 64-bit master seed. Independent substreams are
addressed by integer keys (e.g. `(stream, trial)`) through numpy's
`SeedSequence.spawn_key`, and each substream drives a `Philox` bit generator,
so the numbers a trial sees depend only on `(seed, key)` and never on which
worker ran it or in which order.
"""

from __future__ import annotations
from typing import Union

import numpy as np

SeedLike = Union[int, np.integer, np.random.SeedSequence, np.random.Generator]

# first spawn_key component per consumer
STREAM_PATTERN = 0
STREAM_FADING = 1
STREAM_SWEEP = 2


def as_generator(seed: SeedLike) -> np.random.Generator:
    """Return a Philox-backed Generator for any accepted seed form."""
    if isinstance(seed, np.random.Generator):
        return seed
    if isinstance(seed, np.random.SeedSequence):
        return np.random.Generator(np.random.Philox(seed))
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(int(seed))))


def substream(master_seed: int, *key: int) -> np.random.Generator:
    """Generator for the substream `key` of `master_seed`."""
    ss = np.random.SeedSequence(int(master_seed), spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.Philox(ss))


def derive_seed(master_seed: int, *key: int) -> int:
    """64-bit child seed for `key`, used to hand a sweep point its own master seed."""
    ss = np.random.SeedSequence(int(master_seed), spawn_key=tuple(int(k) for k in key))
    return int(ss.generate_state(1, dtype=np.uint64)[0])

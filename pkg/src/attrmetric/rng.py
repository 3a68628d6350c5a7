"""Seed derivation.

Every random draw in the package comes from a PCG64 generator seeded through
:class:`numpy.random.SeedSequence` with the master seed as entropy and a
tuple of integers (purpose tag, indices) as spawn key.  A draw therefore
depends only on ``(seed, tag, indices)`` and never on evaluation order.
"""

import numpy as np

NOISE = 1
SPLIT = 2
FILL = 3
CURVE = 4
PLANT = 5

_MASK64 = (1 << 64) - 1


def generator(seed: int, *key: int) -> np.random.Generator:
    ss = np.random.SeedSequence(int(seed) & _MASK64, spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.PCG64(ss))


def derive_seed(seed: int, *key: int) -> int:
    """A 64-bit child seed for ``(seed, *key)``."""
    ss = np.random.SeedSequence(int(seed) & _MASK64, spawn_key=tuple(int(k) for k in key))
    return int(ss.generate_state(1, np.uint64)[0])

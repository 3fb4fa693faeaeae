"""Seeded normal variates shared by the simulator and the data generator.

Streams come from a Philox counter-based generator keyed by the 64-bit
seed.  Block ``b`` of a computation starts at counter ``b << 192``, so
blocks are disjoint and can be produced in any order or in parallel.
Uniforms are built from the top 53 bits of each raw word, offset by half a
unit so they lie strictly inside (0, 1), then mapped to normals through the
inverse distribution function.
"""

from __future__ import annotations

import numpy as np
from scipy.special import ndtri

_SEED_MASK = (1 << 64) - 1


def block_generator(seed: int, block: int) -> np.random.Philox:
    return np.random.Philox(key=int(seed) & _SEED_MASK, counter=int(block) << 192)


def uniforms(seed: int, block: int, size: int) -> np.ndarray:
    raw = block_generator(seed, block).random_raw(size)
    return ((raw >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0**-53


def standard_normals(seed: int, block: int, size: int) -> np.ndarray:
    return ndtri(uniforms(seed, block, size))

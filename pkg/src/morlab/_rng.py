"""Seeded randomness.

Every randomized routine takes an explicit ``numpy.random.Generator``.  Seeds
are turned into generators with the PCG64 bit generator, so a given 64-bit
seed reproduces the same keys and ciphertexts on every platform numpy supports.
"""
from __future__ import annotations

import numpy as np

_WORD = 1 << 62


def make_rng(seed: int | None = None) -> np.random.Generator:
    """PCG64 generator; ``None`` draws the seed from OS entropy."""
    return np.random.Generator(np.random.PCG64(seed))


def rand_below(rng: np.random.Generator, n: int) -> int:
    """Uniform integer in ``[0, n)`` for arbitrary-size ``n``."""
    if n <= 0:
        raise ValueError("upper bound must be positive")
    if n <= _WORD:
        return int(rng.integers(0, n))
    nbits = n.bit_length()
    while True:
        x = 0
        for _ in range(0, nbits, 62):
            x = (x << 62) | int(rng.integers(0, _WORD))
        x >>= (-nbits) % 62
        if x < n:
            return x


def rand_range(rng: np.random.Generator, lo: int, hi: int) -> int:
    """Uniform integer in the closed interval ``[lo, hi]``."""
    return lo + rand_below(rng, hi - lo + 1)

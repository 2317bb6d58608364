"""SplitMix64: the single pseudo-random generator used everywhere.

The same recurrence is implemented in the numba kernels, so a chain run
through the fast path consumes exactly the same stream as the pure-Python
path for a given seed.
"""

from __future__ import annotations

import hashlib

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
MIX1 = 0xBF58476D1CE4E5B9
MIX2 = 0x94D049BB133111EB


def mix64(z: int) -> int:
    z = ((z ^ (z >> 30)) * MIX1) & MASK64
    z = ((z ^ (z >> 27)) * MIX2) & MASK64
    return z ^ (z >> 31)


class RandomSource:
    """Seeded SplitMix64 stream of 64-bit words, fair bits and uniforms."""

    __slots__ = ("state",)

    def __init__(self, seed: int = 0):
        self.state = int(seed) & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN) & MASK64
        return mix64(self.state)

    def bit(self) -> int:
        return self.next_u64() >> 63

    def random(self) -> float:
        """Uniform double in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def randbelow(self, k: int) -> int:
        if k <= 0:
            raise ValueError("randbelow needs a positive bound")
        limit = (1 << 64) - ((1 << 64) % k)
        while True:
            v = self.next_u64()
            if v < limit:
                return v % k


def derive_seed(seed: int, *parts) -> int:
    """Deterministic child seed from a base seed and labels (ints or strings)."""
    z = int(seed) & MASK64
    for p in parts:
        if isinstance(p, int):
            v = p & MASK64
        else:
            data = p.encode() if isinstance(p, str) else bytes(p)
            v = int.from_bytes(hashlib.blake2b(data, digest_size=8).digest(), "little")
        z = mix64((z ^ mix64((v + GOLDEN) & MASK64)) & MASK64)
    return z

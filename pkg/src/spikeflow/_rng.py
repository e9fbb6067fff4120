"""Counter-based random streams.

Every random draw in the package comes from a SplitMix64-style generator
addressed by (master seed, replicate, unit). Draw i of a stream is a pure
function of the stream key and i, so parallel and serial runs consume
identical sequences and merge order cannot change results. The compiled
and the numpy kernels reimplement the exact same arithmetic; tests pin
bit equality between all three.
"""
from __future__ import annotations

import math

from .errors import DomainError

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
MIX_A = 0xBF58476D1CE4E5B9
MIX_B = 0x94D049BB133111EB


def mix64(z: int) -> int:
    """SplitMix64 output finalizer (a bijection on 64-bit words)."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * MIX_A) & MASK64
    z = ((z ^ (z >> 27)) * MIX_B) & MASK64
    return z ^ (z >> 31)


def stream_key(master: int, replicate: int = 0, unit: int = 0) -> int:
    # each step is injective in its argument, so distinct (replicate, unit)
    # pairs get distinct keys for a fixed master
    k = mix64((master + GOLDEN) & MASK64)
    k = mix64((k + (replicate & MASK64)) & MASK64)
    k = mix64((k + (unit & MASK64)) & MASK64)
    return k


def _mask_for(bound: int) -> int:
    m = bound - 1
    m |= m >> 1
    m |= m >> 2
    m |= m >> 4
    m |= m >> 8
    m |= m >> 16
    m |= m >> 32
    return m


class Stream:
    """One addressable random stream; cheap to construct, trivially forkable."""

    __slots__ = ("key", "counter")

    def __init__(self, key: int, counter: int = 0):
        self.key = key & MASK64
        self.counter = counter

    @classmethod
    def for_unit(cls, master: int, replicate: int = 0, unit: int = 0) -> "Stream":
        return cls(stream_key(master, replicate, unit))

    def next64(self) -> int:
        self.counter += 1
        return mix64((self.key + self.counter * GOLDEN) & MASK64)

    def randbelow(self, bound: int) -> int:
        """Uniform on {0, ..., bound-1} by masked rejection.

        bound == 1 consumes no draw; the kernels rely on this to keep
        their draw sequences aligned with this reference implementation.
        """
        if bound <= 0:
            raise DomainError(f"randbelow bound must be positive, got {bound}")
        if bound == 1:
            return 0
        mask = _mask_for(bound)
        while True:
            r = self.next64() & mask
            if r < bound:
                return r

    def uniform(self) -> float:
        # 53 random mantissa bits, range [0, 1)
        return (self.next64() >> 11) * 2.0 ** -53

    def exponential(self) -> float:
        return -math.log(1.0 - self.uniform())

    def rademacher(self) -> int:
        return 1 if (self.next64() >> 63) else -1

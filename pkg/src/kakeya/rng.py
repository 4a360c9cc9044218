"""SplitMix64: the package's only source of randomness.

SplitMix64 keeps a single 64-bit state and is counter based (the i-th
output depends only on ``seed + i * GAMMA``), so block draws vectorize with
numpy and ports to other languages reproduce the stream exactly.

Reference stream for seed 0::

    0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4, 0x06C45D188009454F

Bounded integers use rejection: a draw ``x`` is accepted when
``x < 2**64 - (2**64 % bound)`` and mapped to ``x % bound``.
"""

from __future__ import annotations

import numpy as np

GAMMA = 0x9E3779B97F4A7C15
MASK64 = (1 << 64) - 1
DEFAULT_SEED = 3405691582

_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB


def _mix(z: int) -> int:
    z = ((z ^ (z >> 30)) * _M1) & MASK64
    z = ((z ^ (z >> 27)) * _M2) & MASK64
    return z ^ (z >> 31)


class SplitMix64:
    """Seeded 64-bit generator with scalar and block draws sharing one stream."""

    def __init__(self, seed: int = DEFAULT_SEED):
        self.seed = int(seed) & MASK64
        self.counter = 0

    def next_u64(self) -> int:
        self.counter += 1
        return _mix((self.seed + self.counter * GAMMA) & MASK64)

    def u64_array(self, size: int) -> np.ndarray:
        start = self.counter + 1
        self.counter += size
        with np.errstate(over="ignore"):
            idx = np.arange(start, start + size, dtype=np.uint64)
            z = np.uint64(self.seed) + idx * np.uint64(GAMMA)
            z = (z ^ (z >> np.uint64(30))) * np.uint64(_M1)
            z = (z ^ (z >> np.uint64(27))) * np.uint64(_M2)
            return z ^ (z >> np.uint64(31))

    def integer(self, bound: int) -> int:
        """Uniform integer in ``[0, bound)``."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        limit = (1 << 64) - ((1 << 64) % bound)
        while True:
            x = self.next_u64()
            if x < limit:
                return x % bound

    def integers(self, bound: int, size: int) -> np.ndarray:
        """``size`` uniform integers in ``[0, bound)``; same stream as repeated :meth:`integer`."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        limit = (1 << 64) - ((1 << 64) % bound)
        out = np.empty(size, dtype=np.int64)
        filled = 0
        while filled < size:
            need = size - filled
            block = self.u64_array(need + need // 64 + 8)
            if limit < (1 << 64):
                good = np.flatnonzero(block < np.uint64(limit))
            else:
                good = np.arange(block.size)
            take = good[:need]
            out[filled : filled + take.size] = (block[take] % np.uint64(bound)).astype(np.int64)
            filled += take.size
            # hand back the unconsumed tail so the stream stays sequential
            if take.size == need:
                self.counter -= block.size - (int(take[-1]) + 1)
        return out

    def random(self) -> float:
        """Uniform float in [0, 1) from the top 53 bits."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def spawn(self, key: int) -> "SplitMix64":
        """Independent child stream derived from this seed and an integer key."""
        return SplitMix64(_mix((self.seed ^ _mix((key * GAMMA) & MASK64)) & MASK64))


def make_rng(seed_or_rng) -> SplitMix64:
    if isinstance(seed_or_rng, SplitMix64):
        return seed_or_rng
    return SplitMix64(DEFAULT_SEED if seed_or_rng is None else seed_or_rng)

"""Deterministic, splittable random streams.

Monte-Carlo runs need millions of independent streams that are cheap to
derive from a (master_seed, path_index) pair, reproduce bit-for-bit, and
can be re-created identically inside the compiled simulation kernel.
SplitMix64 fits: stream derivation is a couple of integer mixes, a draw is
one 64-bit mix, and there is no per-stream allocation cost.

The compiled kernel in :mod:`divbang._kernels` re-implements exactly the
same integer arithmetic; `RandomSource` here is the reference version used
by the pure-Python engine and by tests.
"""

from __future__ import annotations

import math

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def mix64(z: int) -> int:
    """SplitMix64 finalizer: avalanching 64-bit hash of ``z``."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * _MIX1) & MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & MASK64
    return z ^ (z >> 31)


def stream_state(master_seed: int, stream_index: int) -> int:
    """Initial SplitMix64 state for stream ``stream_index`` of ``master_seed``.

    Distinct (seed, index) pairs map to decorrelated states; the same pair
    always maps to the same state.
    """
    if stream_index < 0:
        raise ValueError("stream_index must be non-negative")
    base = mix64((master_seed + GOLDEN) & MASK64)
    return mix64(base ^ ((stream_index * _MIX1 + 1) & MASK64))


class RandomSource:
    """Single-owner SplitMix64 stream.

    Instances must not be shared between concurrent consumers; derive one
    per path via the (master_seed, path_index) constructor arguments.
    """

    __slots__ = ("_state",)

    def __init__(self, master_seed: int, stream_index: int = 0):
        self._state = stream_state(master_seed, stream_index)

    def next_u64(self) -> int:
        self._state = (self._state + GOLDEN) & MASK64
        return mix64(self._state)

    def uniform(self) -> float:
        """Draw u ~ U[0, 1) with 53 random mantissa bits."""
        return (self.next_u64() >> 11) * 2.0**-53

    def exponential(self, rate: float) -> float:
        """Draw from Exp(rate) by inverse cdf; mean 1/rate."""
        return -math.log1p(-self.uniform()) / rate

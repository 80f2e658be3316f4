"""Seedable 64-bit PRNG used wherever the package needs randomness.

The generator is splitmix64 (Steele, Lea & Flood's SplittableRandom mixer):
a counter stepped by the golden-ratio gamma, finalized with two
multiply-xorshift rounds. It is tiny, has no hidden state beyond one 64-bit
word, and is trivially reproduced bit-for-bit in any language, which keeps
drop schedules, synthetic rosters, and sweep seeds portable.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX_A = 0xBF58476D1CE4E5B9
_MIX_B = 0x94D049BB133111EB


def mix64(x: int) -> int:
    """splitmix64 finalizer: a bijective avalanche mix of one 64-bit word."""
    x &= _MASK64
    x ^= x >> 30
    x = (x * _MIX_A) & _MASK64
    x ^= x >> 27
    x = (x * _MIX_B) & _MASK64
    x ^= x >> 31
    return x


class SplitMix64:
    """splitmix64 stream: state += golden gamma, output = mix64(state)."""

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + _GOLDEN) & _MASK64
        return mix64(self._state)

    def randint(self, n: int) -> int:
        """Uniform integer in [0, n), unbiased via rejection sampling."""
        if n < 1:
            raise ValueError(f"randint needs n >= 1, got {n}")
        # Largest multiple of n that fits in 64 bits; values at or above it
        # would skew the modulus toward small residues.
        limit = ((1 << 64) // n) * n
        while True:
            z = self.next_u64()
            if z < limit:
                return z % n

    def uniform(self) -> float:
        """Uniform float in [0, 1) using the top 53 bits."""
        return (self.next_u64() >> 11) * 2.0**-53

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates shuffle."""
        for i in range(len(items) - 1, 0, -1):
            j = self.randint(i + 1)
            items[i], items[j] = items[j], items[i]


def derive_seed(base_seed: int, *indices: int) -> int:
    """Deterministic child seed from a base seed and an index path.

    Folds each index into the running state as (index + 1) gammas before
    remixing, so derive_seed(s, i, j) != derive_seed(s, j, i) and sibling
    seeds never collide in practice. Used by sweep runners to address runs
    as (config index, run index) without storing seed tables.
    """
    s = mix64(base_seed)
    for ix in indices:
        s = mix64((s + (ix + 1) * _GOLDEN) & _MASK64)
    return s

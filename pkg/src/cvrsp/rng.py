"""Portable 64-bit generators for reproducible outcome sampling.

``Xoshiro256StarStar`` is the reference xoshiro256** generator; its
256-bit state is filled from four consecutive ``SplitMix64`` outputs, the
same seeding rule as the Rust ``rand_xoshiro`` crate's ``seed_from_u64``.
Doubles use the top 53 bits: ``(x >> 11) * 2**-53``.

Test vectors (checked in the test suite)::

    SplitMix64(0):              0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4, ...
    Xoshiro256** state (1,2,3,4): 11520, 0, 1509978240, 1215971899390074240
    Xoshiro256**.from_seed(42):  1546998764402558742, 6990951692964543102, ...

Per-run streams: run ``i`` of a batch seeded with ``seed`` uses
``Xoshiro256StarStar.from_seed(stream_seed(seed, i))``, where
``stream_seed`` is the ``i+1``-th output of ``SplitMix64(seed)``.
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & MASK64


def splitmix64_mix(z: int) -> int:
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN_GAMMA) & MASK64
        return splitmix64_mix(self.state)


class Xoshiro256StarStar:
    def __init__(self, state):
        state = [int(s) & MASK64 for s in state]
        if len(state) != 4 or not any(state):
            raise ValueError("xoshiro256** needs four words, not all zero")
        self.s = state

    @classmethod
    def from_seed(cls, seed: int) -> "Xoshiro256StarStar":
        sm = SplitMix64(seed)
        return cls([sm.next_u64() for _ in range(4)])

    def next_u64(self) -> int:
        s = self.s
        result = (_rotl((s[1] * 5) & MASK64, 7) * 9) & MASK64
        t = (s[1] << 17) & MASK64
        s[2] ^= s[0]
        s[3] ^= s[1]
        s[1] ^= s[2]
        s[0] ^= s[3]
        s[2] ^= t
        s[3] = _rotl(s[3], 45)
        return result

    def random(self) -> float:
        """Uniform double in ``[0, 1)``."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))


def stream_seed(seed: int, index: int) -> int:
    """Seed for the ``index``-th independent stream derived from ``seed``."""
    return splitmix64_mix((seed + (index + 1) * GOLDEN_GAMMA) & MASK64)


def run_stream(seed: int, index: int) -> Xoshiro256StarStar:
    return Xoshiro256StarStar.from_seed(stream_seed(seed, index))

"""Deterministic 64-bit PRNG for reproducible sampling in the CLI.

xoshiro256** (Blackman & Vigna).  State: four 64-bit words s0..s3.
Output:  rotl(s1 * 5, 7) * 9  (all arithmetic mod 2^64), then

    t  = s1 << 17
    s2 ^= s0;  s3 ^= s1;  s1 ^= s2;  s0 ^= s3
    s2 ^= t;   s3  = rotl(s3, 45)

Seeding uses splitmix64: x += 0x9E3779B97F4A7C15;
z = x; z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9;
z = (z ^ (z >> 27)) * 0x94D049BB133111EB; return z ^ (z >> 31).

Pure integer arithmetic with explicit masking, so streams are identical on
every platform for a given seed.
"""

from __future__ import annotations

import math

_MASK = (1 << 64) - 1


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & _MASK


def _splitmix64_stream(seed: int):
    x = seed & _MASK
    while True:
        x = (x + 0x9E3779B97F4A7C15) & _MASK
        z = x
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        yield z ^ (z >> 31)


class Xoshiro256:
    """xoshiro256** generator with convenience samplers."""

    def __init__(self, seed: int):
        sm = _splitmix64_stream(int(seed))
        self.s = [next(sm) for _ in range(4)]

    def next_u64(self) -> int:
        s0, s1, s2, s3 = self.s
        result = (_rotl((s1 * 5) & _MASK, 7) * 9) & _MASK
        t = (s1 << 17) & _MASK
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = _rotl(s3, 45)
        self.s = [s0, s1, s2, s3]
        return result

    def uniform(self, lo: float = 0.0, hi: float = 1.0) -> float:
        u = (self.next_u64() >> 11) * 2.0 ** -53   # 53-bit mantissa in [0, 1)
        return lo + (hi - lo) * u

    def point_in_box(self, lo: float, hi: float, dim: int) -> list[float]:
        return [self.uniform(lo, hi) for _ in range(dim)]

    def sphere_point(self) -> list[float]:
        """Uniform point of the unit 3-sphere by 4-cube rejection."""
        while True:
            v = [self.uniform(-1.0, 1.0) for _ in range(4)]
            n2 = sum(c * c for c in v)
            if 1e-8 < n2 <= 1.0:
                n = math.sqrt(n2)
                return [c / n for c in v]

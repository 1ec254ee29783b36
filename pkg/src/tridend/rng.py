"""Seeded pseudo-random numbers with a fixed, documented algorithm.

SplitMix64 (Steele, Lea & Flood 2014): 64-bit state, increment
0x9E3779B97F4A7C15, output mixed by two xor-shift-multiply rounds. The
stream for a given seed is the same on every platform and Python version,
which the stdlib ``random`` module does not promise.
"""

from fractions import Fraction

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


class SplitMix64:
    def __init__(self, seed: int = 0):
        self.state = seed & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + _GAMMA) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def randbelow(self, n: int) -> int:
        """Uniform integer in [0, n) by rejection sampling."""
        if n <= 0:
            raise ValueError("n must be positive")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            x = self.next_u64()
            if x < limit:
                return x % n

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi]."""
        return lo + self.randbelow(hi - lo + 1)

    def choice(self, seq):
        return seq[self.randbelow(len(seq))]

    def fraction(self, num_range=5, max_den=4) -> Fraction:
        return Fraction(self.randint(-num_range, num_range), self.randint(1, max_den))

    def spawn(self) -> "SplitMix64":
        return SplitMix64(self.next_u64())

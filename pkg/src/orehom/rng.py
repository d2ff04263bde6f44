"""Seeded randomness for property checks.

Every draw is derived from 64-bit words of a ``random.Random`` stream, so a
seed fixes the whole sequence of sampled algebra elements.
"""

from __future__ import annotations

import random
from fractions import Fraction

MAX_ENTRY = 9


class Rng:
    def __init__(self, seed: int = 0):
        self.seed = seed
        self._r = random.Random(seed)

    def word(self) -> int:
        return self._r.getrandbits(64)

    def below(self, n: int) -> int:
        return self.word() % n

    def between(self, lo: int, hi: int) -> int:
        """Uniform-ish integer in ``[lo, hi]``."""
        return lo + self.below(hi - lo + 1)

    def chance(self, p: Fraction) -> bool:
        return self.below(p.denominator) < p.numerator

    def rational(self, allow_zero: bool = True) -> Fraction:
        while True:
            num = self.between(-MAX_ENTRY, MAX_ENTRY)
            den = self.between(1, MAX_ENTRY)
            if num or allow_zero:
                return Fraction(num, den)

    def vector(self, n: int, density: Fraction = Fraction(2, 3)) -> tuple:
        return tuple(self.rational() if self.chance(density) else Fraction(0) for _ in range(n))

    def choice(self, seq):
        return seq[self.below(len(seq))]

    def fork(self, tag: str) -> "Rng":
        """Independent stream keyed by ``tag``; keeps suites insensitive to each other's draw counts."""
        mix = random.Random(f"{self.seed}:{tag}").getrandbits(64)
        return Rng(mix)

"""Prime field arithmetic.

Elements are plain Python ints in ``[0, p)``.  The default modulus is the
Mersenne prime ``2**61 - 1``; small moduli are accepted for testing.
"""
from __future__ import annotations

import random
from fractions import Fraction

P = (1 << 61) - 1


class DenominatorZero(ZeroDivisionError):
    """A division hit zero in the field (usually an unlucky sample point)."""


def fp_inv(a: int, modulus: int = P) -> int:
    a %= modulus
    if a == 0:
        raise DenominatorZero("zero has no inverse")
    return pow(a, -1, modulus)


class PrimeField:
    """GF(p) as a ring adaptor: ``zero``/``one`` and arithmetic methods on ints."""

    def __init__(self, modulus: int = P):
        if modulus < 2:
            raise ValueError("modulus must be a prime >= 2")
        self.p = modulus
        self.zero = 0
        self.one = 1 % modulus

    def __repr__(self):
        return f"PrimeField({self.p})"

    @property
    def field(self) -> "PrimeField":
        return self

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.p

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.p

    def neg(self, a: int) -> int:
        return (-a) % self.p

    def mul(self, a: int, b: int) -> int:
        return (a * b) % self.p

    def inv(self, a: int) -> int:
        return fp_inv(a, self.p)

    def div(self, a: int, b: int) -> int:
        return (a * fp_inv(b, self.p)) % self.p

    def pow(self, a: int, n: int) -> int:
        return pow(a, n, self.p)

    def is_zero(self, a: int) -> bool:
        return a % self.p == 0

    def from_int(self, n: int) -> int:
        return n % self.p

    def from_fraction(self, q: Fraction) -> int:
        q = Fraction(q)
        return (q.numerator * fp_inv(q.denominator, self.p)) % self.p

    def scale(self, a: int, c: int) -> int:
        return (a * c) % self.p

    def random_nonzero(self, rng: random.Random) -> int:
        return rng.randint(1, self.p - 1)

    def to_signed(self, a: int) -> int:
        """Symmetric representative, handy for printing small values."""
        a %= self.p
        return a - self.p if a > self.p // 2 else a


GF_P = PrimeField(P)

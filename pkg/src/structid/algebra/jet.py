"""First-order jets over a prime field: a value plus its gradient."""
from __future__ import annotations

from fractions import Fraction

from .field import GF_P, PrimeField, fp_inv


class JetScalar:
    __slots__ = ("val", "grad")

    def __init__(self, val: int, grad: tuple[int, ...]):
        self.val = val
        self.grad = grad

    def __repr__(self):
        return f"JetScalar({self.val}, {self.grad})"

    def __eq__(self, other):
        return (isinstance(other, JetScalar) and self.val == other.val
                and self.grad == other.grad)

    __hash__ = None


class JetRing:
    """Ring of first-order jets in ``n`` directions over ``field``."""

    def __init__(self, n: int, field: PrimeField = GF_P):
        self.n = n
        self.field = field
        self._zgrad = (0,) * n
        self.zero = JetScalar(0, self._zgrad)
        self.one = JetScalar(field.one, self._zgrad)

    def const(self, v: int) -> JetScalar:
        return JetScalar(v % self.field.p, self._zgrad)

    def variable(self, v: int, index: int) -> JetScalar:
        grad = [0] * self.n
        grad[index] = 1
        return JetScalar(v % self.field.p, tuple(grad))

    def from_fraction(self, q: Fraction) -> JetScalar:
        return self.const(self.field.from_fraction(q))

    def from_int(self, n: int) -> JetScalar:
        return self.const(n)

    def add(self, a: JetScalar, b: JetScalar) -> JetScalar:
        p = self.field.p
        return JetScalar((a.val + b.val) % p,
                         tuple((x + y) % p for x, y in zip(a.grad, b.grad)))

    def sub(self, a: JetScalar, b: JetScalar) -> JetScalar:
        p = self.field.p
        return JetScalar((a.val - b.val) % p,
                         tuple((x - y) % p for x, y in zip(a.grad, b.grad)))

    def neg(self, a: JetScalar) -> JetScalar:
        p = self.field.p
        return JetScalar((-a.val) % p, tuple((-x) % p for x in a.grad))

    def mul(self, a: JetScalar, b: JetScalar) -> JetScalar:
        p = self.field.p
        av, bv = a.val, b.val
        return JetScalar((av * bv) % p,
                         tuple((av * y + bv * x) % p for x, y in zip(a.grad, b.grad)))

    def scale(self, a: JetScalar, c: int) -> JetScalar:
        p = self.field.p
        return JetScalar((a.val * c) % p, tuple((x * c) % p for x in a.grad))

    def inv(self, a: JetScalar) -> JetScalar:
        p = self.field.p
        iv = fp_inv(a.val, p)
        d = (-iv * iv) % p
        return JetScalar(iv, tuple((x * d) % p for x in a.grad))

    def div(self, a: JetScalar, b: JetScalar) -> JetScalar:
        return self.mul(a, self.inv(b))

    def pow(self, a: JetScalar, n: int) -> JetScalar:
        p = self.field.p
        if n == 0:
            return self.one
        vn1 = pow(a.val, n - 1, p)
        d = (n * vn1) % p
        return JetScalar((vn1 * a.val) % p, tuple((x * d) % p for x in a.grad))

    def is_zero(self, a: JetScalar) -> bool:
        return a.val == 0 and not any(a.grad)

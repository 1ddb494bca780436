"""Truncated power series in ``t`` over an arbitrary coefficient ring."""
from __future__ import annotations

from fractions import Fraction

from .field import DenominatorZero


class JetSeries:
    """Coefficients ``c_0 .. c_{order-1}``; the coefficient type is set by the ring."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        self.coeffs = tuple(coeffs)

    @property
    def order(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, k):
        return self.coeffs[k]

    def __len__(self):
        return len(self.coeffs)

    def __eq__(self, other):
        return isinstance(other, JetSeries) and self.coeffs == other.coeffs

    __hash__ = None

    def __repr__(self):
        return f"JetSeries({list(self.coeffs)!r})"


class SeriesRing:
    """Ring of series truncated at ``order`` coefficients over ``base``.

    ``base`` must provide ``zero``, ``one``, ``add``, ``sub``, ``neg``, ``mul``,
    ``div``, ``scale`` (by a field element) and ``from_fraction``.
    """

    def __init__(self, base, order: int, field=None):
        if order < 1:
            raise ValueError("order must be >= 1")
        self.base = base
        self.order = order
        self.field = field if field is not None else base.field
        self.zero = self.const(base.zero)
        self.one = self.const(base.one)

    def const(self, c) -> JetSeries:
        return JetSeries((c,) + (self.base.zero,) * (self.order - 1))

    def from_fraction(self, q: Fraction) -> JetSeries:
        return self.const(self.base.from_fraction(q))

    def from_int(self, n: int) -> JetSeries:
        return self.const(self.base.from_int(n))

    def add(self, a: JetSeries, b: JetSeries) -> JetSeries:
        add = self.base.add
        return JetSeries(add(x, y) for x, y in zip(a.coeffs, b.coeffs))

    def sub(self, a: JetSeries, b: JetSeries) -> JetSeries:
        sub = self.base.sub
        return JetSeries(sub(x, y) for x, y in zip(a.coeffs, b.coeffs))

    def neg(self, a: JetSeries) -> JetSeries:
        return JetSeries(self.base.neg(x) for x in a.coeffs)

    def mul(self, a: JetSeries, b: JetSeries) -> JetSeries:
        base = self.base
        ac, bc = a.coeffs, b.coeffs
        if _is_const(a, base):
            return JetSeries(base.mul(ac[0], y) for y in bc)
        if _is_const(b, base):
            return JetSeries(base.mul(x, bc[0]) for x in ac)
        out = []
        for k in range(self.order):
            acc = base.mul(ac[0], bc[k])
            for i in range(1, k + 1):
                acc = base.add(acc, base.mul(ac[i], bc[k - i]))
            out.append(acc)
        return JetSeries(out)

    def div(self, a: JetSeries, b: JetSeries) -> JetSeries:
        return series_div(a, b, self)

    def scale(self, a: JetSeries, c) -> JetSeries:
        return JetSeries(self.base.scale(x, c) for x in a.coeffs)

    def pow(self, a: JetSeries, n: int) -> JetSeries:
        result = self.one
        base = a
        while n:
            if n & 1:
                result = self.mul(result, base)
            n >>= 1
            if n:
                base = self.mul(base, base)
        return result

    def integrate(self, a: JetSeries, c0) -> JetSeries:
        """``c0 + integral_0^t a``, truncated to the ring order."""
        f = self.field
        out = [c0]
        for k in range(self.order - 1):
            out.append(self.base.scale(a.coeffs[k], f.inv(f.from_int(k + 1))))
        return JetSeries(out)


def _is_const(a: JetSeries, base) -> bool:
    z = base.is_zero
    return all(z(c) for c in a.coeffs[1:])


def series_mul(a: JetSeries, b: JetSeries, ring: SeriesRing) -> JetSeries:
    return ring.mul(a, b)


def series_div(a: JetSeries, b: JetSeries, ring: SeriesRing) -> JetSeries:
    """Quotient ``a / b`` with ``c_k = (a_k - sum_{j>=1} b_j c_{k-j}) / b_0``."""
    base = ring.base
    b0 = b.coeffs[0]
    try:
        inv_b0 = base.div(base.one, b0)
    except ZeroDivisionError as exc:
        raise DenominatorZero("series denominator has zero constant term") from exc
    out = []
    for k in range(ring.order):
        acc = a.coeffs[k]
        for j in range(1, k + 1):
            acc = base.sub(acc, base.mul(b.coeffs[j], out[k - j]))
        out.append(base.mul(acc, inv_b0))
    return JetSeries(out)

"""Sparse multivariate polynomials and rational functions.

Coefficients live in either the rationals (``QQ``) or a prime field.  A
polynomial is a dict from exponent tuples to nonzero coefficients; the ring
object owns the variable names and performs all arithmetic.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .field import DenominatorZero, PrimeField


class RationalField:
    """The rationals as a ring adaptor over ``fractions.Fraction``."""

    zero = Fraction(0)
    one = Fraction(1)

    def __repr__(self):
        return "QQ"

    @property
    def field(self):
        return self

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a == 0:
            raise DenominatorZero("division by zero")
        return 1 / Fraction(a)

    def div(self, a, b):
        if b == 0:
            raise DenominatorZero("division by zero")
        return Fraction(a) / b

    def pow(self, a, n):
        return Fraction(a) ** n

    def scale(self, a, c):
        return a * c

    def is_zero(self, a):
        return a == 0

    def from_int(self, n):
        return Fraction(n)

    def from_fraction(self, q):
        return Fraction(q)


QQ = RationalField()


class NotPolynomial(ArithmeticError):
    """Division by a non-constant polynomial inside a polynomial ring."""


class SparsePoly:
    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[tuple[int, ...], object]):
        self.terms = dict(terms)

    def __eq__(self, other):
        return isinstance(other, SparsePoly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        return f"SparsePoly({self.terms!r})"

    def __len__(self):
        return len(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)


class PolyRing:
    """Polynomials in ``variables`` with coefficients in ``coeffs``."""

    def __init__(self, coeffs, variables: Sequence[str]):
        self.coeffs = coeffs
        self.variables = tuple(variables)
        self.nvars = len(self.variables)
        self._zexp = (0,) * self.nvars
        self.zero = SparsePoly({})
        self.one = self.const(coeffs.one)
        self._p = coeffs.p if isinstance(coeffs, PrimeField) else None

    def __repr__(self):
        return f"PolyRing({self.coeffs!r}, {self.variables})"

    @property
    def field(self):
        return self.coeffs

    def const(self, c) -> SparsePoly:
        return SparsePoly({} if self.coeffs.is_zero(c) else {self._zexp: c})

    def gen(self, name_or_index) -> SparsePoly:
        i = (self.variables.index(name_or_index) if isinstance(name_or_index, str)
             else name_or_index)
        e = [0] * self.nvars
        e[i] = 1
        return SparsePoly({tuple(e): self.coeffs.one})

    def gens(self) -> list[SparsePoly]:
        return [self.gen(i) for i in range(self.nvars)]

    def from_fraction(self, q) -> SparsePoly:
        return self.const(self.coeffs.from_fraction(q))

    def from_int(self, n) -> SparsePoly:
        return self.const(self.coeffs.from_int(n))

    def is_zero(self, a: SparsePoly) -> bool:
        return not a.terms

    def is_const(self, a: SparsePoly) -> bool:
        return not a.terms or (len(a.terms) == 1 and self._zexp in a.terms)

    def const_value(self, a: SparsePoly):
        return a.terms.get(self._zexp, self.coeffs.zero)

    def add(self, a: SparsePoly, b: SparsePoly) -> SparsePoly:
        if len(a.terms) < len(b.terms):
            a, b = b, a
        out = dict(a.terms)
        cr = self.coeffs
        for e, c in b.terms.items():
            v = cr.add(out[e], c) if e in out else c
            if cr.is_zero(v):
                out.pop(e, None)
            else:
                out[e] = v
        return SparsePoly(out)

    def neg(self, a: SparsePoly) -> SparsePoly:
        neg = self.coeffs.neg
        return SparsePoly({e: neg(c) for e, c in a.terms.items()})

    def sub(self, a: SparsePoly, b: SparsePoly) -> SparsePoly:
        return self.add(a, self.neg(b))

    def scale(self, a: SparsePoly, c) -> SparsePoly:
        cr = self.coeffs
        if cr.is_zero(c):
            return self.zero
        return SparsePoly({e: cr.mul(v, c) for e, v in a.terms.items()})

    def mul(self, a: SparsePoly, b: SparsePoly) -> SparsePoly:
        if not a.terms or not b.terms:
            return self.zero
        out: dict = {}
        p = self._p
        if p is not None:
            for ea, ca in a.terms.items():
                for eb, cb in b.terms.items():
                    e = tuple(x + y for x, y in zip(ea, eb))
                    out[e] = out.get(e, 0) + ca * cb
            return SparsePoly({e: c % p for e, c in out.items() if c % p})
        cr = self.coeffs
        for ea, ca in a.terms.items():
            for eb, cb in b.terms.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                out[e] = cr.add(out[e], cr.mul(ca, cb)) if e in out else cr.mul(ca, cb)
        return SparsePoly({e: c for e, c in out.items() if not cr.is_zero(c)})

    def pow(self, a: SparsePoly, n: int) -> SparsePoly:
        result = self.one
        base = a
        while n:
            if n & 1:
                result = self.mul(result, base)
            n >>= 1
            if n:
                base = self.mul(base, base)
        return result

    def div(self, a: SparsePoly, b: SparsePoly) -> SparsePoly:
        if not b.terms:
            raise DenominatorZero("division by the zero polynomial")
        if not self.is_const(b):
            raise NotPolynomial("division by a non-constant polynomial")
        return self.scale(a, self.coeffs.inv(self.const_value(b)))

    def evaluate(self, a: SparsePoly, point: Sequence) -> object:
        cr = self.coeffs
        acc = cr.zero
        for e, c in a.terms.items():
            term = c
            for x, k in zip(point, e):
                if k:
                    term = cr.mul(term, cr.pow(x, k))
            acc = cr.add(acc, term)
        return acc

    def to_text(self, a: SparsePoly) -> str:
        if not a.terms:
            return "0"
        parts = []
        for e in sorted(a.terms, key=lambda e: (sum(e), e), reverse=True):
            c = a.terms[e]
            mono = "*".join(
                v if k == 1 else f"{v}^{k}" for v, k in zip(self.variables, e) if k)
            parts.append(f"{c}*{mono}" if mono else f"{c}")
        return " + ".join(parts)


class RationalFunction:
    __slots__ = ("num", "den")

    def __init__(self, num: SparsePoly, den: SparsePoly):
        if den.is_zero():
            raise DenominatorZero("rational function with zero denominator")
        self.num = num
        self.den = den

    def __repr__(self):
        return f"RationalFunction({self.num!r}, {self.den!r})"


class RationalFunctionRing:
    """Fractions of polynomials, without gcd cancellation.

    Denominators are only normalized when they are constants or when both
    operands share the same denominator.
    """

    def __init__(self, polys: PolyRing):
        self.polys = polys
        self.zero = RationalFunction(polys.zero, polys.one)
        self.one = RationalFunction(polys.one, polys.one)

    @property
    def field(self):
        return self.polys.coeffs

    def _make(self, num: SparsePoly, den: SparsePoly) -> RationalFunction:
        P = self.polys
        if den.is_zero():
            raise DenominatorZero("division by the zero polynomial")
        if P.is_const(den):
            return RationalFunction(P.scale(num, P.coeffs.inv(P.const_value(den))), P.one)
        if num.is_zero():
            return self.zero
        if num == den:
            return self.one
        return RationalFunction(num, den)

    def from_poly(self, a: SparsePoly) -> RationalFunction:
        return RationalFunction(a, self.polys.one)

    def const(self, c) -> RationalFunction:
        return self.from_poly(self.polys.const(c))

    def from_fraction(self, q) -> RationalFunction:
        return self.from_poly(self.polys.from_fraction(q))

    def from_int(self, n) -> RationalFunction:
        return self.from_poly(self.polys.from_int(n))

    def gen(self, name_or_index) -> RationalFunction:
        return self.from_poly(self.polys.gen(name_or_index))

    def is_zero(self, a: RationalFunction) -> bool:
        return a.num.is_zero()

    def add(self, a, b):
        P = self.polys
        if a.den == b.den:
            return self._make(P.add(a.num, b.num), a.den)
        return self._make(P.add(P.mul(a.num, b.den), P.mul(b.num, a.den)),
                          P.mul(a.den, b.den))

    def neg(self, a):
        return RationalFunction(self.polys.neg(a.num), a.den)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        P = self.polys
        if a.den == b.num and not a.den.is_zero():
            return self._make(a.num, b.den)
        if b.den == a.num and not b.den.is_zero():
            return self._make(b.num, a.den)
        return self._make(P.mul(a.num, b.num), P.mul(a.den, b.den))

    def scale(self, a, c):
        return self._make(self.polys.scale(a.num, c), a.den)

    def inv(self, a):
        if a.num.is_zero():
            raise DenominatorZero("division by the zero rational function")
        return self._make(a.den, a.num)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, n):
        P = self.polys
        return self._make(P.pow(a.num, n), P.pow(a.den, n))


def expr_to_rational_function(expr, variables: Iterable[str], coeffs=QQ):
    """Expand an expression AST into a ``RationalFunction``.

    Raises ``ZeroDivisionError`` if some denominator is the zero polynomial.
    """
    from .evaluate import eval_expr

    ring = RationalFunctionRing(PolyRing(coeffs, tuple(variables)))
    env = {v: ring.gen(v) for v in ring.polys.variables}
    return eval_expr(expr, env, ring), ring

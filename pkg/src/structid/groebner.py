"""Buchberger's algorithm over a prime field, degrevlex order.

Polynomials are dicts ``{exponent tuple: coefficient}`` with coefficients in
``[0, p)``.  Basis elements are kept monic so reductions need no inverses.
"""
from __future__ import annotations

import heapq
import math
import time
import dataclasses
from dataclasses import dataclass
from typing import Iterable, Sequence

from .algebra.field import GF_P, PrimeField
from .verdicts import AnalysisError, BudgetExceeded

Exp = tuple[int, ...]
Poly = dict

INFINITE = math.inf


def degrevlex_key(e: Exp):
    return (sum(e), tuple(-x for x in reversed(e)))


def _heap_key(e: Exp):
    # smallest heap key == largest monomial
    return (-sum(e), tuple(reversed(e)))


def leading_monomial(f: Poly) -> Exp:
    return max(f, key=degrevlex_key)


def divides(a: Exp, b: Exp) -> bool:
    return all(x <= y for x, y in zip(a, b))


def lcm(a: Exp, b: Exp) -> Exp:
    return tuple(max(x, y) for x, y in zip(a, b))


def monic(f: Poly, p: int) -> Poly:
    lm = leading_monomial(f)
    inv = pow(f[lm], -1, p)
    return {e: (c * inv) % p for e, c in f.items()}


@dataclass
class Budget:
    """Resource limits for one basis computation; ``None`` disables a limit."""

    max_monomials: int | None = 200_000
    max_pairs: int | None = None
    max_quotient_dim: int | None = 2_000
    deadline: float | None = None  # time.monotonic() value

    @classmethod
    def with_timeout(cls, seconds: float | None, **kw) -> "Budget":
        deadline = None if seconds is None else time.monotonic() + seconds
        return cls(deadline=deadline, **kw)

    def check_time(self) -> None:
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise BudgetExceeded("wall-clock budget exceeded")


@dataclass
class GroebnerBasis:
    polys: list[Poly]
    nvars: int
    field: PrimeField = GF_P
    variables: tuple[str, ...] | None = None
    order: str = "degrevlex"
    stats: dict = dataclasses.field(default_factory=dict)

    @property
    def leading_monomials(self) -> list[Exp]:
        return [leading_monomial(g) for g in self.polys]

    @property
    def staircase(self) -> list[Exp]:
        return self.leading_monomials

    def is_unit(self) -> bool:
        return any(not any(lm) for lm in self.leading_monomials)

    def normal_form(self, f: Poly) -> Poly:
        return normal_form(f, self._reducers(), self.field.p)

    def _reducers(self):
        if getattr(self, "_red", None) is None or len(self._red) != len(self.polys):
            self._red = [(leading_monomial(g), g) for g in self.polys]
        return self._red

    def has_pure_power(self, var: int) -> bool:
        for lm in self.leading_monomials:
            if lm[var] > 0 and all(x == 0 for i, x in enumerate(lm) if i != var):
                return True
        return False

    def is_zero_dimensional(self) -> bool:
        return all(self.has_pure_power(i) for i in range(self.nvars))

    def to_text(self) -> list[str]:
        names = self.variables or tuple(f"x{i}" for i in range(self.nvars))
        return [poly_to_text(g, names, self.field) for g in self.polys]


def poly_to_text(f: Poly, names: Sequence[str], field: PrimeField = GF_P) -> str:
    if not f:
        return "0"
    parts = []
    for e in sorted(f, key=degrevlex_key, reverse=True):
        c = field.to_signed(f[e])
        mono = "*".join(v if k == 1 else f"{v}^{k}" for v, k in zip(names, e) if k)
        if not mono:
            parts.append(str(c))
        elif c == 1:
            parts.append(mono)
        elif c == -1:
            parts.append("-" + mono)
        else:
            parts.append(f"{c}*{mono}")
    return " + ".join(parts).replace("+ -", "- ")


def normal_form(f: Poly, reducers: Sequence[tuple[Exp, Poly]], p: int) -> Poly:
    """Full reduction of ``f`` by monic ``reducers`` (pairs of LM and polynomial)."""
    work = {e: c % p for e, c in f.items() if c % p}
    heap = [(_heap_key(e), e) for e in work]
    heapq.heapify(heap)
    rem: Poly = {}
    while heap:
        _, e = heapq.heappop(heap)
        c = work.get(e)
        if c is None:
            continue
        for lm, g in reducers:
            if divides(lm, e):
                break
        else:
            rem[e] = c
            del work[e]
            continue
        del work[e]
        q = tuple(x - y for x, y in zip(e, lm))
        for ge, gc in g.items():
            if ge == lm:
                continue
            ne = tuple(x + y for x, y in zip(ge, q))
            old = work.get(ne)
            v = ((old or 0) - c * gc) % p
            if v:
                if old is None:
                    heapq.heappush(heap, (_heap_key(ne), ne))
                work[ne] = v
            elif old is not None:
                del work[ne]
    return rem


def _mul_term(g: Poly, q: Exp, c: int, p: int) -> Poly:
    return {tuple(x + y for x, y in zip(e, q)): (v * c) % p for e, v in g.items()}


def s_polynomial(f: Poly, g: Poly, p: int) -> Poly:
    lf, lg = leading_monomial(f), leading_monomial(g)
    m = lcm(lf, lg)
    a = _mul_term(f, tuple(x - y for x, y in zip(m, lf)), pow(f[lf], -1, p), p)
    b = _mul_term(g, tuple(x - y for x, y in zip(m, lg)), pow(g[lg], -1, p), p)
    for e, c in b.items():
        v = (a.get(e, 0) - c) % p
        if v:
            a[e] = v
        else:
            a.pop(e, None)
    return a


def buchberger(generators: Iterable[Poly], nvars: int, field: PrimeField = GF_P,
               budget: Budget | None = None,
               variables: Sequence[str] | None = None) -> GroebnerBasis:
    """Reduced Gröbner basis of the ideal generated by ``generators``.

    Pairs are processed smallest-lcm first; the product criterion drops pairs
    with coprime leading monomials and the chain criterion drops ``(i, j)``
    when some ``k`` with ``LM_k | lcm(i, j)`` already had both ``(i, k)`` and
    ``(j, k)`` handled.
    """
    p = field.p
    budget = budget or Budget(max_monomials=None, max_quotient_dim=None)
    basis: list[Poly] = []
    lms: list[Exp] = []
    pending: list = []  # heap of (key, i, j)
    queued: set[tuple[int, int]] = set()
    stats = {"pairs": 0, "zero_reductions": 0, "product_skips": 0, "chain_skips": 0}
    nterms = 0

    def add(f: Poly) -> None:
        nonlocal nterms
        f = monic(f, p)
        lm = leading_monomial(f)
        j = len(basis)
        basis.append(f)
        lms.append(lm)
        nterms += len(f)
        if budget.max_monomials is not None and nterms > budget.max_monomials:
            raise BudgetExceeded(f"basis exceeded {budget.max_monomials} monomials")
        for i in range(j):
            heapq.heappush(pending, (degrevlex_key(lcm(lms[i], lm)), i, j))
            queued.add((i, j))

    def reducers():
        return [(lms[i], basis[i]) for i in range(len(basis)) if basis[i] is not None]

    for g in generators:
        g = {e: c % p for e, c in g.items() if c % p}
        if not g:
            continue
        r = normal_form(g, reducers(), p) if basis else g
        if r:
            add(r)

    while pending:
        budget.check_time()
        _, i, j = heapq.heappop(pending)
        queued.discard((i, j))
        m = lcm(lms[i], lms[j])
        if all(a == 0 or b == 0 for a, b in zip(lms[i], lms[j])):
            stats["product_skips"] += 1
            continue
        skip = False
        for k in range(len(basis)):
            if k in (i, j) or not divides(lms[k], m):
                continue
            if (min(i, k), max(i, k)) not in queued and (min(j, k), max(j, k)) not in queued:
                skip = True
                break
        if skip:
            stats["chain_skips"] += 1
            continue
        stats["pairs"] += 1
        if budget.max_pairs is not None and stats["pairs"] > budget.max_pairs:
            raise BudgetExceeded(f"more than {budget.max_pairs} critical pairs")
        r = normal_form(s_polynomial(basis[i], basis[j], p), reducers(), p)
        if r:
            add(r)
        else:
            stats["zero_reductions"] += 1

    return GroebnerBasis(_reduce_basis(basis, lms, p), nvars, field,
                         tuple(variables) if variables else None, stats=stats)


def _reduce_basis(basis: list[Poly], lms: list[Exp], p: int) -> list[Poly]:
    keep = []
    for i, lm in enumerate(lms):
        redundant = False
        for j, other in enumerate(lms):
            if j == i or not divides(other, lm):
                continue
            # equal LMs: keep the earliest one
            if other != lm or j < i:
                redundant = True
                break
        if not redundant:
            keep.append(i)
    polys = [basis[i] for i in keep]
    out = []
    for idx, g in enumerate(polys):
        others = [(leading_monomial(h), h) for k, h in enumerate(polys) if k != idx]
        lm = leading_monomial(g)
        tail = normal_form({e: c for e, c in g.items() if e != lm}, others, p)
        tail[lm] = g[lm]
        out.append(monic(tail, p))
    out.sort(key=lambda g: degrevlex_key(leading_monomial(g)))
    return out


def is_groebner_basis(gb: GroebnerBasis) -> bool:
    """Every S-polynomial of the basis reduces to zero."""
    p = gb.field.p
    red = gb._reducers()
    for a in range(len(gb.polys)):
        for b in range(a + 1, len(gb.polys)):
            if normal_form(s_polynomial(gb.polys[a], gb.polys[b], p), red, p):
                return False
    return True


class _SparseEchelon:
    """Incremental linear independence test for sparse vectors (dicts)."""

    def __init__(self, p: int):
        self.p = p
        self.rows: list[tuple[Exp, Poly]] = []

    def reduce(self, v: Poly) -> Poly:
        p = self.p
        v = dict(v)
        for piv, row in self.rows:
            c = v.get(piv)
            if c:
                for e, x in row.items():
                    nv = (v.get(e, 0) - c * x) % p
                    if nv:
                        v[e] = nv
                    else:
                        v.pop(e, None)
        return v

    def add(self, v: Poly) -> bool:
        v = self.reduce(v)
        if not v:
            return False
        piv = max(v, key=degrevlex_key)
        inv = pow(v[piv], -1, self.p)
        self.rows.append((piv, {e: (x * inv) % self.p for e, x in v.items()}))
        return True


def minimal_poly_degree(var: int, gb: GroebnerBasis, budget: Budget | None = None) -> float:
    """Degree of the minimal polynomial of ``x_var`` modulo the ideal, or ``inf``.

    If no leading monomial is a pure power of ``x_var`` then every power of
    the variable is a standard monomial, so no univariate relation exists.
    Otherwise normal forms of ``1, x, x^2, ...`` are accumulated until the
    first linear dependency.
    """
    if gb.is_unit():
        raise AnalysisError("inconsistent system: the ideal is the whole ring")
    if not gb.has_pure_power(var):
        return INFINITE
    budget = budget or Budget(max_monomials=None)
    p = gb.field.p
    red = gb._reducers()
    unit = [0] * gb.nvars
    unit[var] = 1
    x = tuple(unit)
    cur: Poly = {(0,) * gb.nvars: 1}
    ech = _SparseEchelon(p)
    cap = budget.max_quotient_dim
    k = 0
    while True:
        budget.check_time()
        if not ech.add(cur):
            return k
        k += 1
        if cap is not None and k > cap:
            raise BudgetExceeded(f"minimal polynomial degree exceeds {cap}")
        cur = normal_form(_mul_term(cur, x, 1, p), red, p)


def minimal_polynomial(var: int, gb: GroebnerBasis, budget: Budget | None = None) -> list[int]:
    """Coefficients (constant term first, monic) of the minimal polynomial of ``x_var``."""
    d = minimal_poly_degree(var, gb, budget)
    if d == INFINITE:
        raise ValueError("variable has no minimal polynomial")
    p = gb.field.p
    red = gb._reducers()
    unit = [0] * gb.nvars
    unit[var] = 1
    x = tuple(unit)
    nfs = [{(0,) * gb.nvars: 1}]
    for _ in range(d):
        nfs.append(normal_form(_mul_term(nfs[-1], x, 1, p), red, p))
    # solve sum_{i<d} c_i nf_i = -nf_d
    monos = sorted({e for f in nfs for e in f}, key=degrevlex_key)
    rows = [[nfs[i].get(e, 0) for i in range(d)] + [(-nfs[d].get(e, 0)) % p] for e in monos]
    from .algebra.linalg import rref

    R, piv = rref(rows, p)
    coeffs = [0] * d
    for row, c in zip(R, piv):
        if c < d:
            coeffs[c] = row[d]
    return coeffs + [1]

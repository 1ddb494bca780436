"""Independent reference computations used by the test-suite.

These deliberately avoid the package's series, jet and prime-field code:
Lie derivatives are formed with sympy polynomials over the rationals and the
observability-identifiability matrix is ranked exactly.
"""
from __future__ import annotations

import itertools
import random

import sympy as sp

from structid.dsl import BinOp, Neg, Num, Pow, Sym


def to_sympy(e, env):
    if isinstance(e, Num):
        return sp.Rational(e.value.numerator, e.value.denominator)
    if isinstance(e, Sym):
        return env[e.name]
    if isinstance(e, Neg):
        return -to_sympy(e.operand, env)
    if isinstance(e, Pow):
        return to_sympy(e.base, env) ** e.exponent
    a, b = to_sympy(e.left, env), to_sympy(e.right, env)
    return {"+": a + b, "-": a - b, "*": a * b, "/": a / b}[e.op]


def lie_jacobian(model, seed=1, order=None):
    """Exact Jacobian of output derivatives ``y^(k)(0)`` w.r.t. the unknowns.

    Polynomial right-hand sides only.  Input derivatives are extra symbols set
    to random rationals, the same genericity the engine uses.
    """
    nu = order or model.n_unknowns + 1
    X = {s: sp.Symbol("X_" + s) for s in model.states}
    Pm = {p: sp.Symbol("P_" + p) for p in model.params}
    U = {u: [sp.Symbol(f"U_{u}_{k}") for k in range(nu + 1)] for u in model.inputs}
    gens = list(X.values()) + list(Pm.values()) + [x for l in U.values() for x in l]
    env = {**X, **Pm, **{u: U[u][0] for u in model.inputs}}

    def poly(expr):
        return sp.Poly(expr, *gens, domain="QQ")

    f = {s: poly(to_sympy(model.state_rhs[s], env)) for s in model.states}

    def lie(h):
        r = poly(0)
        for s in model.states:
            r += h.diff(X[s]) * f[s]
        for u in model.inputs:
            for k in range(nu):
                r += h.diff(U[u][k]) * poly(U[u][k + 1])
        return r

    rng = random.Random(seed)
    pt = {g: sp.Rational(rng.randint(2, 50), rng.randint(1, 7)) for g in gens}
    for s, v in model.known_ics.items():
        pt[X[s]] = sp.Rational(v.numerator, v.denominator)
    unknowns = [X[s] for s in model.unknown_states] + [Pm[p] for p in model.params]
    vals = [pt[g] for g in gens]
    rows = []
    for g in model.outputs.values():
        h = poly(to_sympy(g, env))
        for _ in range(nu):
            row = []
            for v in unknowns:
                d = h.diff(v)
                row.append(d.eval(dict(zip(gens, vals))) if not d.is_zero else 0)
            rows.append(row)
            h = lie(h)
    return sp.Matrix(rows)


def local_verdicts_oracle(model, seed=1):
    """``{unknown: True if locally identifiable}`` from the exact Lie Jacobian."""
    M = lie_jacobian(model, seed)
    r = M.rank()
    names = list(model.unknown_states) + list(model.params)
    out = {}
    for j, n in enumerate(names):
        keep = [i for i in range(len(names)) if i != j]
        out[n] = M[:, keep].rank() == r - 1
    return out


def brute_force_solutions(polys, nvars, q):
    """All points of GF(q)^nvars where every dict-polynomial vanishes."""
    sols = []
    for pt in itertools.product(range(q), repeat=nvars):
        ok = True
        for f in polys:
            acc = 0
            for e, c in f.items():
                term = c
                for x, k in zip(pt, e):
                    if k:
                        term = term * pow(x, k, q)
                acc += term
            if acc % q:
                ok = False
                break
        if ok:
            sols.append(pt)
    return sols


def observability_rank_rational(A, C):
    """Rank of the Kalman observability matrix ``[C; CA; ...; CA^{n-1}]`` over Q."""
    A = sp.Matrix(A)
    C = sp.Matrix(C)
    n = A.shape[0]
    blocks = []
    cur = C
    for _ in range(n):
        blocks.append(cur)
        cur = cur * A
    return sp.Matrix.vstack(*blocks).rank()

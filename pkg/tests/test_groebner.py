import itertools
import random

import pytest
import sympy as sp

from structid.algebra import PrimeField
from structid.groebner import (INFINITE, Budget, buchberger, degrevlex_key, is_groebner_basis,
                               leading_monomial, minimal_poly_degree, minimal_polynomial,
                               normal_form, s_polynomial)
from structid.verdicts import AnalysisError, BudgetExceeded

from oracles import brute_force_solutions

F101 = PrimeField(101)
F17 = PrimeField(17)


def poly(text, names, p):
    """Dict polynomial from sympy text, coefficients reduced mod p."""
    if isinstance(names, str):
        names = names.split()
    syms = [sp.Symbol(n) for n in names]
    P = sp.Poly(sp.sympify(text), *syms)
    return {e: int(c) % p for e, c in P.as_dict().items() if int(c) % p}


def test_two_point_ideal():
    gens = [poly("a + b - 5", "a b", 101), poly("a*b - 6", "a b", 101)]
    gb = buchberger(gens, 2, F101, variables=("a", "b"))
    assert set(gb.to_text()) == {"a + b - 5", "b^2 - 5*b + 6"}
    assert is_groebner_basis(gb)
    assert minimal_poly_degree(0, gb) == 2
    assert minimal_poly_degree(1, gb) == 2
    assert minimal_polynomial(1, gb) == [6, 101 - 5, 1]


def test_already_a_basis():
    gb = buchberger([poly("x**2 - 1", "x", 101)], 1, F101, variables=("x",))
    assert gb.to_text() == ["x^2 - 1"]


def test_linear_triangularisation():
    gens = [poly("x - 3", "x y", 101), poly("y - x", "x y", 101)]
    gb = buchberger(gens, 2, F101, variables=("x", "y"))
    assert set(gb.to_text()) == {"x - 3", "y - 3"}
    assert minimal_poly_degree(0, gb) == 1


def test_single_linear_generator():
    gb = buchberger([poly("x - 3", "x", 101)], 1, F101)
    assert minimal_poly_degree(0, gb) == 1


def test_free_variable_has_no_minimal_polynomial():
    gb = buchberger([poly("x*y - 6", "x y", 101)], 2, F101)
    assert minimal_poly_degree(0, gb) == INFINITE
    assert not gb.is_zero_dimensional()
    with pytest.raises(ValueError):
        minimal_polynomial(0, gb)


def test_inconsistent_system():
    gens = [poly("x - 1", "x", 101), poly("x - 2", "x", 101)]
    gb = buchberger(gens, 1, F101)
    assert gb.is_unit()
    with pytest.raises(AnalysisError):
        minimal_poly_degree(0, gb)


def test_s_polynomial_cancels_leading_terms():
    f = poly("x**2*y + 1", "x y", 101)
    g = poly("x*y**2 - x", "x y", 101)
    s = s_polynomial(f, g, 101)
    lcm = (2, 2)
    assert lcm not in s
    assert all(degrevlex_key(e) < degrevlex_key(lcm) for e in s)


def test_normal_form_is_remainder():
    gb = buchberger([poly("x**2 - 2", "x", 101)], 1, F101)
    r = normal_form(poly("x**5", "x", 101), [(leading_monomial(g), g) for g in gb.polys], 101)
    assert r == {(1,): 4}


def test_monomial_budget():
    gens = [poly(f"x**{k} + y**{k} + z", "x y z", 101) for k in range(2, 6)]
    with pytest.raises(BudgetExceeded):
        buchberger(gens, 3, F101, Budget(max_monomials=5))


def test_quotient_dimension_budget():
    gb = buchberger([poly("x**10 - 1", "x", 101)], 1, F101)
    with pytest.raises(BudgetExceeded):
        minimal_poly_degree(0, gb, Budget(max_monomials=None, max_quotient_dim=3))


def test_agrees_with_sympy():
    rng = random.Random(8)
    names = ("x", "y", "z")
    syms = sp.symbols(names)
    for _ in range(15):
        gens = []
        for _ in range(3):
            expr = sum(rng.randint(-5, 5) * syms[0] ** rng.randint(0, 2) * syms[1] **
                       rng.randint(0, 2) * syms[2] ** rng.randint(0, 1) for _ in range(3))
            expr += rng.randint(-5, 5)
            gens.append(sp.expand(expr))
        gens = [g for g in gens if g != 0]
        ours = buchberger([poly(str(g), names, 101) for g in gens], 3, F101, variables=names)
        ref = sp.groebner(gens, *syms, modulus=101, order="grevlex")
        ref_set = set()
        for g in ref.exprs:
            # sympy's reduced basis is already monic w.r.t. grevlex
            P = sp.Poly(g, *syms, modulus=101)
            ref_set.add(frozenset((e, int(c) % 101) for e, c in P.as_dict().items()))
        ours_set = {frozenset(g.items()) for g in ours.polys}
        assert ours_set == ref_set
        assert is_groebner_basis(ours)


def _interpolate(xs, ys, q):
    """Coefficients (constant first) of the Lagrange interpolant over GF(q)."""
    n = len(xs)
    coeffs = [0] * n
    for i in range(n):
        basis = [1]
        denom = 1
        for j in range(n):
            if j == i:
                continue
            basis = [(a - xs[j] * b) % q for a, b in zip([0] + basis, basis + [0])]
            denom = denom * (xs[i] - xs[j]) % q
        scale = ys[i] * pow(denom, -1, q) % q
        for k, c in enumerate(basis):
            coeffs[k] = (coeffs[k] + scale * c) % q
    return coeffs


def _add(f, g, q):
    out = dict(f)
    for e, c in g.items():
        v = (out.get(e, 0) + c) % q
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return out


def _mul_term(f, e, c, q):
    return {tuple(a + b for a, b in zip(k, e)): v * c % q for k, v in f.items()}


def _point_ideal(points, nvars, q, rng):
    """Scrambled generators of the vanishing ideal of ``points`` (distinct first coords)."""
    xs = [pt[0] for pt in points]
    one = [0] * nvars
    f = {(0,) * nvars: 1}
    for a in xs:
        f = _add(_mul_term(f, (1,) + (0,) * (nvars - 1), 1, q),
                 _mul_term(f, (0,) * nvars, -a % q, q), q)
    gens = [f]
    for j in range(1, nvars):
        g = _interpolate(xs, [pt[j] for pt in points], q)
        h = {tuple(k if i == 0 else 0 for i in range(nvars)): c for k, c in enumerate(g) if c}
        e = tuple(1 if i == j else 0 for i in range(nvars))
        gens.append(_add({e: 1}, {k: -v % q for k, v in h.items()}, q))
    # unimodular scrambling keeps the ideal unchanged
    for _ in range(3):
        i, j = rng.sample(range(len(gens)), 2)
        e = tuple(rng.randint(0, 1) for _ in range(nvars))
        gens[i] = _add(gens[i], _mul_term(gens[j], e, rng.randrange(1, q), q), q)
    return gens


def test_brute_force_solution_counts():
    q = 17
    rng = random.Random(2024)
    for trial in range(50):
        nvars = rng.choice([2, 3])
        k = rng.randint(1, 5)
        xs = rng.sample(range(q), k)
        points = [(x,) + tuple(rng.randrange(q) for _ in range(nvars - 1)) for x in xs]
        gens = _point_ideal(points, nvars, q, rng)
        sols = brute_force_solutions(gens, nvars, q)
        assert sorted(sols) == sorted(points), trial
        gb = buchberger(gens, nvars, F17)
        assert is_groebner_basis(gb)
        for v in range(nvars):
            assert minimal_poly_degree(v, gb) == len({pt[v] for pt in sols}), (trial, v)

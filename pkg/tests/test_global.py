import math

import pytest

from structid.algebra import P
from structid.dsl import parse_model
from structid.globalid import assess_global, build_identifiability_system, merge_with_local
from structid.groebner import is_groebner_basis
from structid.local import assess_local
from structid.verdicts import Verdict

G, L, NI, U = Verdict.GLOBALLY, Verdict.LOCALLY, Verdict.NONIDENTIFIABLE, Verdict.UNDETERMINED

EXPDECAY = parse_model("x'(t) = -k * x(t)\ny(t) = x(t)")
BILINEAR = parse_model("x'(t) = -p * q * x(t)\ny(t) = x(t)")


def test_exponential_decay_system_by_hand():
    s = build_identifiability_system(EXPDECAY, order=3)
    assert s.variables == ("x", "k")
    v = s.point.values
    x0, k = v["x"], v["k"]
    # c0 = x, c1 = -k x, c2 = k^2 x / 2, each minus its sampled value
    v0, v1, v2 = x0, -k * x0 % P, k * k * x0 * pow(2, -1, P) % P
    assert s.generators[0] == {(1, 0): 1, (0, 0): -v0 % P}
    assert s.generators[1] == {(1, 1): P - 1, (0, 0): -v1 % P}
    assert s.generators[2] == {(1, 2): pow(2, -1, P), (0, 0): -v2 % P}


def test_constant_model_single_generator():
    s = build_identifiability_system(parse_model("x'(t) = 0\ny(t) = x(t)"))
    assert len(s.generators) == 1
    ((e, c), (e0, c0)) = sorted(s.generators[0].items(), reverse=True)
    assert (e, c) == ((1,), 1)
    assert c0 == -s.point.values["x"] % P


def test_bilinear_system_sees_only_the_product():
    s = build_identifiability_system(BILINEAR)
    ip, iq = s.variables.index("p"), s.variables.index("q")
    for g in s.generators:
        for e in g:
            assert e[ip] == e[iq]


def test_exponential_decay():
    r = assess_global(EXPDECAY)
    assert r.verdicts == {"x": G, "k": G}
    assert r.degrees == {"x": 1, "k": 1}


def test_bilinear():
    r = assess_global(BILINEAR)
    assert r.verdicts == {"x": G, "p": NI, "q": NI}
    assert r.degrees["p"] == math.inf


def test_sir(models):
    r = assess_global(models["sir"])
    assert r.verdicts["beta"] is G and r.verdicts["gamma"] is G
    assert r.verdicts["R"] is NI
    assert is_groebner_basis(r.basis)


def test_pk_generic_input(models):
    r = assess_global(models["pk"])
    assert set(r.verdicts.values()) == {G}


def test_sign_ambiguity_is_local_only():
    m = parse_model("x'(t) = -a^2 * x(t)\ny(t) = x(t)")
    r = assess_global(m)
    assert r.verdicts == {"x": G, "a": L}
    assert r.degrees["a"] == 2


def test_positive_dimensional_ideal_is_settled():
    m = parse_model("x1'(t) = -(a01 + a21) * x1(t) + a12 * x2(t)\n"
                    "x2'(t) = a21 * x1(t) - a12 * x2(t)\ny(t) = x1(t)")
    r = assess_global(m)
    assert r.verdicts["x1"] is G
    assert all(r.verdicts[u] is NI for u in ("x2", "a01", "a21", "a12"))


def test_zero_timeout_is_undetermined():
    r = assess_global(EXPDECAY, timeout=0)
    assert r.timed_out
    assert set(r.verdicts.values()) == {U}


def test_monomial_budget_is_undetermined(models):
    r = assess_global(models["sir"], max_monomials=10)
    assert set(r.verdicts.values()) == {U}
    assert "monomials" in r.reason


def test_merge_with_local():
    merged = merge_with_local({"a": U, "b": U, "c": G}, {"a": NI, "b": L, "c": L})
    assert merged == {"a": NI, "b": U, "c": G}


def test_global_implies_local(models):
    for name in ("exp_decay", "sir", "pk", "bilinear", "viral_augmented"):
        m = models[name]
        loc = assess_local(m).verdicts
        glob = assess_global(m, timeout=60).verdicts
        for u, v in glob.items():
            if v in (G, L):
                assert loc[u] is L, (name, u)
            if loc[u] is NI:
                assert v is NI, (name, u)

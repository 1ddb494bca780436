from fractions import Fraction

import pytest

from structid.dsl import (BinOp, ModelSyntaxError, Neg, Num, Pow, Sym, canonical_text,
                          expr_to_text, parse_expr, parse_model)
from structid.cases import corpus


def test_exponential_decay_classification():
    m = parse_model("x'(t) = -k * x(t)\ny(t) = x(t)")
    assert m.states == ("x",)
    assert m.params == ("k",)
    assert m.inputs == ()
    assert tuple(m.outputs) == ("y",)
    assert m.known_ics == {}


def test_constant_dynamics_has_no_params():
    m = parse_model("x'(t) = 0\ny(t) = x(t)")
    assert m.params == ()
    assert m.state_rhs["x"] == Num(Fraction(0))


def test_inputs_are_timed_non_states():
    m = parse_model("x1'(t) = -(a01 + a21) * x1(t) + a12 * x2(t) + b * u(t)\n"
                    "x2'(t) = a21 * x1(t) - a12 * x2(t)\n"
                    "y(t) = x1(t)")
    assert m.states == ("x1", "x2")
    assert m.inputs == ("u",)
    assert m.params == ("a01", "a21", "a12", "b")


def test_ic_block_and_headers():
    src = "params: k\nx'(t) = -k*x(t)\ny(t) = x(t)\nic:\nx(0) = 10\n"
    m = parse_model(src)
    assert m.known_ics == {"x": Fraction(10)}
    assert m.unknown_states == ()
    assert m.n_unknowns == 1


def test_ic_on_same_line_as_header():
    m = parse_model("x'(t) = -k*x(t)\ny(t) = x(t)\nic: x(0) = 1/2\n")
    assert m.known_ics == {"x": Fraction(1, 2)}


def test_operator_precedence_and_power():
    e, timed = parse_expr("-a + b * c ^ 2 / d")
    assert e == BinOp("+", Neg(Sym("a")), BinOp("/", BinOp("*", Sym("b"), Pow(Sym("c"), 2)),
                                                 Sym("d")))
    assert timed == set()


def test_numeric_fraction_folding():
    e, _ = parse_expr("1/3 * x(t)")
    assert e == BinOp("*", Num(Fraction(1, 3)), Sym("x"))


@pytest.mark.parametrize("src, line, col", [
    ("x'(t) = -k * x(t)\ny(t) = x(t) $", 2, 13),
    ("x'(t) = -k * x(t)\nx'(t) = k\ny(t) = x(t)", 2, 1),
    ("x'(t) = k * x(t)^-1\ny(t) = x(t)", 1, 18),
    ("x'(t) = k * x(t)^1.5\ny(t) = x(t)", 1, 18),
    ("x'(t) = k / 0\ny(t) = x(t)", 1, 11),
    ("x'(t) = k / (1 - 1)\ny(t) = x(t)", 1, 1),
    ("x'(t) = -k * x(t)\nx(t) = x(t)", 2, 1),
    ("x'(t) = -k * x\ny(t) = x(t)", 1, 14),
])
def test_errors_carry_positions(src, line, col):
    with pytest.raises(ModelSyntaxError) as ei:
        parse_model(src)
    assert (ei.value.line, ei.value.col) == (line, col)


def test_strict_requires_declarations():
    src = "x'(t) = -k * x(t)\ny(t) = x(t)"
    with pytest.raises(ModelSyntaxError, match="unknown symbol 'k'"):
        parse_model(src, strict=True)
    assert parse_model("params: k\n" + src, strict=True).params == ("k",)


def test_misspelled_state_is_diagnosed_in_strict_mode():
    src = ("params: a01, a21, a12, b\ninputs: u\n"
           "x1'(t) = -(a01 + a21) * x(t) + a12 * x2(t) + b * u(t)\n"
           "x2'(t) = a21 * x1(t) - a12 * x2(t)\n"
           "y(t) = x1(t)")
    loose = parse_model(src)
    assert "x" in loose.inputs
    with pytest.raises(ModelSyntaxError) as ei:
        parse_model(src, strict=True)
    assert "'x'" in str(ei.value)
    assert (ei.value.line, ei.value.col) == (3, 25)


def test_round_trip_sir():
    src = ("S'(t) = -beta * S(t) * I(t)\nI'(t) = beta * S(t) * I(t) - gamma * I(t)\n"
           "R'(t) = gamma * I(t)\ny(t) = beta * S(t) * I(t)")
    m = parse_model(src)
    assert parse_model(canonical_text(m)) == m


def test_round_trip_empty_params():
    m = parse_model("x'(t) = 0\ny(t) = x(t)")
    assert parse_model(canonical_text(m)) == m


def test_round_trip_preserves_known_ics_and_inputs():
    m = parse_model("inputs: v, u\nx'(t) = u(t) - x(t)/2\ny(t) = x(t)^2\nic:\nx(0) = -3/4")
    again = parse_model(canonical_text(m))
    assert again == m
    assert again.inputs == ("v", "u")


def test_round_trip_corpus():
    for case in corpus():
        m = case.model
        assert parse_model(canonical_text(m)) == m, case.name


def test_render_keeps_right_associative_parens():
    e, timed = parse_expr("a - (b - c) / (d * e)")
    assert parse_expr(expr_to_text(e, timed))[0] == e


def _tokens(line):
    import re
    return [m.span() for m in re.finditer(r"[A-Za-z_][A-Za-z_0-9]*|\d+(?:\.\d+)?|\S", line)]


MUTANTS = ["zz", "t", "0", "+", "*", "(", ")", "'", "^", "="]


def test_single_token_mutants_differ_or_error():
    for case in corpus():
        original = case.model
        lines = case.source.splitlines()
        for i, line in enumerate(lines):
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            for a, b in _tokens(line):
                for rep in MUTANTS:
                    if line[a:b] == rep:
                        continue
                    mutated = lines[:i] + [line[:a] + rep + line[b:]] + lines[i + 1:]
                    try:
                        m = parse_model("\n".join(mutated))
                    except ModelSyntaxError as exc:
                        assert exc.line >= 1 and exc.col >= 1
                        continue
                    assert m != original, (case.name, i, line, rep)

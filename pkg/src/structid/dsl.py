"""Model file parser and internal model representation.

A model file is line oriented::

    # exponential decay
    x'(t) = -k * x(t)
    y(t) = x(t)
    ic:
    x(0) = 10

Differentiated left-hand sides are states, undifferentiated left-hand sides
are outputs, ``name(t)`` references to anything that is not a state are
inputs and every other bare symbol is a parameter.  Optional header lines
``params: a, b`` and ``inputs: u`` fix declaration order; with ``strict=True``
every parameter and input must be declared.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Mapping

__all__ = [
    "Num",
    "Sym",
    "Neg",
    "BinOp",
    "Pow",
    "ModelSyntaxError",
    "ModelIR",
    "parse_model",
    "parse_expr",
    "canonical_text",
    "expr_symbols",
    "expr_to_text",
]


class ModelSyntaxError(ValueError):
    """Parse or validation error carrying a 1-based line/column."""

    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.message = message
        self.line = line
        self.col = col
        super().__init__(f"line {line}, column {col}: {message}")


# -- expression AST ---------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Sym:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * /
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exponent: int


Expr = Num | Sym | Neg | BinOp | Pow


def expr_symbols(e: Expr) -> set[str]:
    out: set[str] = set()
    stack = [e]
    while stack:
        node = stack.pop()
        if isinstance(node, Sym):
            out.add(node.name)
        elif isinstance(node, Neg):
            stack.append(node.operand)
        elif isinstance(node, BinOp):
            stack.extend((node.left, node.right))
        elif isinstance(node, Pow):
            stack.append(node.base)
    return out


def _symbols_in_order(e: Expr, acc: list[str]) -> None:
    if isinstance(e, Sym):
        if e.name not in acc:
            acc.append(e.name)
    elif isinstance(e, Neg):
        _symbols_in_order(e.operand, acc)
    elif isinstance(e, BinOp):
        _symbols_in_order(e.left, acc)
        _symbols_in_order(e.right, acc)
    elif isinstance(e, Pow):
        _symbols_in_order(e.base, acc)


# -- model IR ---------------------------------------------------------------


@dataclass(frozen=True)
class ModelIR:
    """Validated rational ODE model ``x' = f(x, u, theta)``, ``y = g(x, u, theta)``."""

    states: tuple[str, ...]
    params: tuple[str, ...]
    inputs: tuple[str, ...]
    state_rhs: Mapping[str, Expr]
    outputs: Mapping[str, Expr]
    known_ics: Mapping[str, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        groups = [set(self.states), set(self.params), set(self.inputs), set(self.outputs)]
        seen: set[str] = set()
        for g in groups:
            clash = seen & g
            if clash:
                raise ValueError(f"symbol classes overlap: {sorted(clash)}")
            seen |= g
        if set(self.state_rhs) != set(self.states):
            raise ValueError("every state needs exactly one right-hand side")
        if not set(self.known_ics) <= set(self.states):
            raise ValueError("known initial conditions must refer to states")
        allowed = set(self.states) | set(self.params) | set(self.inputs)
        for name, e in list(self.state_rhs.items()) + list(self.outputs.items()):
            extra = expr_symbols(e) - allowed
            if extra:
                raise ValueError(f"{name}: undeclared symbols {sorted(extra)}")

    @property
    def unknown_states(self) -> tuple[str, ...]:
        return tuple(s for s in self.states if s not in self.known_ics)

    @property
    def n_unknowns(self) -> int:
        return len(self.unknown_states) + len(self.params)

    def with_outputs(self, outputs: Mapping[str, Expr]) -> "ModelIR":
        return ModelIR(self.states, self.params, self.inputs, self.state_rhs,
                       dict(outputs), self.known_ics)

    def with_known_ics(self, known_ics: Mapping[str, Fraction]) -> "ModelIR":
        return ModelIR(self.states, self.params, self.inputs, self.state_rhs,
                       self.outputs, dict(known_ics))


# -- lexer ------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"(?P<ws>[ \t\r]+)"
    r"|(?P<num>\d+(?:\.\d*)?|\.\d+)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>[-+*/^()'=,:])"
)


@dataclass(frozen=True)
class Token:
    kind: str  # num | ident | op | end
    text: str
    line: int
    col: int


def _tokenize(line: str, lineno: int) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(line):
        m = _TOKEN_RE.match(line, pos)
        if m is None:
            raise ModelSyntaxError(f"unexpected character {line[pos]!r}", lineno, pos + 1)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append(Token(kind, m.group(), lineno, pos + 1))
        pos = m.end()
    tokens.append(Token("end", "", lineno, len(line) + 1))
    return tokens


def _literal(text: str) -> Fraction:
    # Fraction parses decimals exactly: "0.25" -> 1/4
    return Fraction(text)


# -- parser -----------------------------------------------------------------


class _ExprParser:
    """Recursive descent over one line's tokens.

    Time-dependent references ``x(t)`` become ``Sym`` nodes and are recorded
    in ``timed``; bare identifiers are recorded in ``bare``.
    """

    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.i = 0
        self.timed: dict[str, Token] = {}
        self.bare: dict[str, Token] = {}

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def error(self, msg: str, tok: Token | None = None) -> ModelSyntaxError:
        tok = tok or self.tok
        return ModelSyntaxError(msg, tok.line, tok.col)

    def accept(self, text: str) -> Token | None:
        if self.tok.kind == "op" and self.tok.text == text:
            t = self.tok
            self.i += 1
            return t
        return None

    def expect(self, text: str) -> Token:
        t = self.accept(text)
        if t is None:
            found = self.tok.text or "end of line"
            raise self.error(f"expected {text!r}, found {found!r}")
        return t

    def expr(self) -> Expr:
        node = self.term()
        while True:
            if self.accept("+"):
                node = BinOp("+", node, self.term())
            elif self.accept("-"):
                node = BinOp("-", node, self.term())
            else:
                return node

    def term(self) -> Expr:
        node = self.unary()
        while True:
            if self.accept("*"):
                node = BinOp("*", node, self.unary())
                continue
            slash = self.accept("/")
            if slash is None:
                return node
            rhs = self.unary()
            if isinstance(rhs, Num) and rhs.value == 0:
                raise self.error("division by zero", slash)
            if isinstance(node, Num) and isinstance(rhs, Num):
                # literal fraction such as 1/2
                node = Num(node.value / rhs.value)
            else:
                node = BinOp("/", node, rhs)

    def unary(self) -> Expr:
        if self.accept("-"):
            return Neg(self.unary())
        if self.accept("+"):
            return self.unary()
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        caret = self.accept("^")
        if caret is None:
            return base
        tok = self.tok
        if tok.kind == "op" and tok.text == "-":
            raise self.error("negative exponent", tok)
        if tok.kind == "op" and tok.text == "(":
            # allow ^(3) but still a literal
            self.i += 1
            tok = self.tok
            if tok.kind != "num":
                raise self.error("exponent must be a non-negative integer literal", tok)
            self.i += 1
            self.expect(")")
        elif tok.kind == "num":
            self.i += 1
        else:
            raise self.error("exponent must be a non-negative integer literal", tok)
        value = _literal(tok.text)
        if value.denominator != 1:
            raise self.error("non-integer exponent", tok)
        if self.tok.kind == "op" and self.tok.text == "^":
            raise self.error("chained exponents are not supported")
        return Pow(base, int(value))

    def atom(self) -> Expr:
        tok = self.tok
        if tok.kind == "num":
            self.i += 1
            return Num(_literal(tok.text))
        if tok.kind == "ident":
            self.i += 1
            if self.accept("("):
                arg = self.tok
                if arg.kind != "ident" or arg.text != "t":
                    raise self.error("expected 't' in time-dependent reference", arg)
                self.i += 1
                self.expect(")")
                self.timed.setdefault(tok.text, tok)
                return Sym(tok.text)
            if tok.text == "t":
                raise self.error("bare 't' is not allowed; models must be autonomous", tok)
            self.bare.setdefault(tok.text, tok)
            return Sym(tok.text)
        if self.accept("("):
            node = self.expr()
            self.expect(")")
            return node
        found = tok.text or "end of line"
        raise self.error(f"unexpected {found!r}")

    def finish(self) -> None:
        if self.tok.kind != "end":
            raise self.error(f"unexpected {self.tok.text!r}")


def _split_names(tokens: list[Token], lineno: int) -> list[str]:
    names = []
    expect_name = True
    for tok in tokens[:-1]:
        if expect_name:
            if tok.kind != "ident":
                raise ModelSyntaxError(f"expected a name, found {tok.text!r}", tok.line, tok.col)
            names.append(tok.text)
        elif not (tok.kind == "op" and tok.text == ","):
            raise ModelSyntaxError(f"expected ',', found {tok.text!r}", tok.line, tok.col)
        expect_name = not expect_name
    return names


def _const_value(e: Expr, tok: Token) -> Fraction:
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Neg):
        return -_const_value(e.operand, tok)
    if isinstance(e, Pow):
        return _const_value(e.base, tok) ** e.exponent
    if isinstance(e, BinOp):
        a, b = _const_value(e.left, tok), _const_value(e.right, tok)
        if e.op == "+":
            return a + b
        if e.op == "-":
            return a - b
        if e.op == "*":
            return a * b
        if b == 0:
            raise ModelSyntaxError("division by zero", tok.line, tok.col)
        return a / b
    raise ModelSyntaxError("initial condition must be a numeric constant", tok.line, tok.col)


def parse_expr(text: str) -> tuple[Expr, set[str]]:
    """Parse a single expression (``x(t)`` or bare symbols).

    Returns the AST and the set of names used with ``(t)``.
    """
    parser = _ExprParser(_tokenize(text, 1))
    if parser.tok.kind == "end":
        raise parser.error("empty expression")
    node = parser.expr()
    parser.finish()
    return node, set(parser.timed)


def parse_model(text: str, strict: bool = False) -> ModelIR:
    states: dict[str, Expr] = {}
    outputs: dict[str, Expr] = {}
    ics: dict[str, Fraction] = {}
    declared_params: list[str] = []
    declared_inputs: list[str] = []
    timed_refs: dict[str, Token] = {}
    bare_refs: dict[str, Token] = {}
    lhs_tokens: dict[str, Token] = {}
    order: list[str] = []
    in_ic = False

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        tokens = _tokenize(line, lineno)
        head = tokens[0]
        # section headers
        if (head.kind == "ident" and len(tokens) >= 3 and tokens[1].kind == "op"
                and tokens[1].text == ":"):
            key = head.text
            rest = tokens[2:]
            if key == "ic":
                in_ic = True
                if rest[0].kind == "end":
                    continue
                tokens = rest
                head = tokens[0]
            elif key == "params":
                declared_params.extend(_split_names(rest, lineno))
                continue
            elif key == "inputs":
                declared_inputs.extend(_split_names(rest, lineno))
                continue
            else:
                raise ModelSyntaxError(f"unknown section {key!r}", head.line, head.col)

        p = _ExprParser(tokens)
        name_tok = p.tok
        if name_tok.kind != "ident":
            raise p.error("expected an equation left-hand side")
        p.i += 1
        name = name_tok.text

        if in_ic:
            p.expect("(")
            zero = p.tok
            if zero.kind != "num" or _literal(zero.text) != 0:
                raise p.error("initial conditions are written x(0) = value")
            p.i += 1
            p.expect(")")
            p.expect("=")
            value = _const_value(p.expr(), name_tok)
            p.finish()
            if name in ics:
                raise ModelSyntaxError(f"duplicate initial condition for {name!r}",
                                       name_tok.line, name_tok.col)
            ics[name] = value
            lhs_tokens.setdefault("ic:" + name, name_tok)
            continue

        differentiated = p.accept("'") is not None
        p.expect("(")
        arg = p.tok
        if arg.kind != "ident" or arg.text != "t":
            raise p.error("expected 't' on the left-hand side", arg)
        p.i += 1
        p.expect(")")
        p.expect("=")
        rhs = p.expr()
        p.finish()
        for k, v in p.timed.items():
            timed_refs.setdefault(k, v)
        for k, v in p.bare.items():
            bare_refs.setdefault(k, v)

        if name in states or name in outputs:
            what = "state equation" if differentiated and name in states else "definition"
            raise ModelSyntaxError(f"duplicate {what} for {name!r}", name_tok.line, name_tok.col)
        if differentiated:
            states[name] = rhs
        else:
            outputs[name] = rhs
        lhs_tokens[name] = name_tok
        _symbols_in_order(rhs, order)

    if not states:
        raise ModelSyntaxError("model declares no state equations", 1, 1)
    if not outputs:
        raise ModelSyntaxError("model declares no outputs", 1, 1)

    for name in outputs:
        if name in states:
            tok = lhs_tokens[name]
            raise ModelSyntaxError(f"output {name!r} collides with a state", tok.line, tok.col)
    for name, tok in timed_refs.items():
        if name in outputs:
            raise ModelSyntaxError(f"output {name!r} used on a right-hand side", tok.line, tok.col)
    for name, tok in bare_refs.items():
        if name in states:
            raise ModelSyntaxError(f"state {name!r} must be written {name}(t)", tok.line, tok.col)
        if name in outputs:
            raise ModelSyntaxError(f"output {name!r} used on a right-hand side", tok.line, tok.col)
        if name in timed_refs:
            raise ModelSyntaxError(f"{name!r} used both with and without (t)", tok.line, tok.col)
    for name in ics:
        if name not in states:
            tok = lhs_tokens["ic:" + name]
            raise ModelSyntaxError(f"initial condition for non-state {name!r}", tok.line, tok.col)

    input_names = [n for n in order if n in timed_refs and n not in states]
    if strict:
        for n in input_names:
            if n not in declared_inputs:
                tok = timed_refs[n]
                raise ModelSyntaxError(f"unknown time-dependent symbol {n!r}", tok.line, tok.col)
    for n in declared_inputs:
        if n in states or n in outputs:
            raise ModelSyntaxError(f"input {n!r} collides with another symbol", 1, 1)
    inputs = list(dict.fromkeys(declared_inputs + input_names))

    param_names = [n for n in order if n in bare_refs]
    if strict:
        for n in param_names:
            if n not in declared_params:
                tok = bare_refs[n]
                raise ModelSyntaxError(f"unknown symbol {n!r}", tok.line, tok.col)
    for n in declared_params:
        if n in states or n in outputs or n in inputs:
            raise ModelSyntaxError(f"parameter {n!r} collides with another symbol", 1, 1)
    params = list(dict.fromkeys(declared_params + param_names))

    model = ModelIR(
        states=tuple(states),
        params=tuple(params),
        inputs=tuple(inputs),
        state_rhs=states,
        outputs=outputs,
        known_ics=ics,
    )
    _check_denominators(model, lhs_tokens)
    return model


def _check_denominators(model: ModelIR, lhs_tokens: Mapping[str, Token]) -> None:
    from .algebra.poly import expr_to_rational_function

    variables = model.states + model.params + model.inputs
    for name, e in list(model.state_rhs.items()) + list(model.outputs.items()):
        try:
            expr_to_rational_function(e, variables)
        except ZeroDivisionError:
            tok = lhs_tokens[name]
            raise ModelSyntaxError(f"{name}: division by the zero polynomial",
                                   tok.line, tok.col) from None


# -- serialization ----------------------------------------------------------

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def _fmt_fraction(v: Fraction) -> str:
    if v.denominator == 1:
        return str(v.numerator)
    return f"{v.numerator}/{v.denominator}"


def expr_to_text(e: Expr, timed: frozenset[str] | set[str] = frozenset()) -> str:
    """Render ``e`` so that re-parsing yields the identical AST."""
    return _render(e, timed)[0]


def _render(e: Expr, timed) -> tuple[str, int]:
    # returns (text, precedence); atoms get 4
    if isinstance(e, Num):
        if e.value < 0:
            return f"(-{_fmt_fraction(-e.value)})", 4
        if e.value.denominator != 1:
            return _fmt_fraction(e.value), 2
        return str(e.value.numerator), 4
    if isinstance(e, Sym):
        return (f"{e.name}(t)" if e.name in timed else e.name), 4
    if isinstance(e, Neg):
        inner, p = _render(e.operand, timed)
        # "-a*b" would reparse as Neg(a)*b
        if p < 4:
            inner = f"({inner})"
        return f"-{inner}", 3
    if isinstance(e, Pow):
        inner, p = _render(e.base, timed)
        if p < 4:
            inner = f"({inner})"
        return f"{inner}^{e.exponent}", 4
    prec = _PREC[e.op]
    left, lp = _render(e.left, timed)
    right, rp = _render(e.right, timed)
    if lp < prec:
        left = f"({left})"
    if rp <= prec:
        right = f"({right})"
    return f"{left} {e.op} {right}", prec


def canonical_text(m: ModelIR) -> str:
    timed = set(m.states) | set(m.inputs)
    lines = []
    if m.params:
        lines.append("params: " + ", ".join(m.params))
    if m.inputs:
        lines.append("inputs: " + ", ".join(m.inputs))
    for s in m.states:
        lines.append(f"{s}'(t) = {expr_to_text(m.state_rhs[s], timed)}")
    for y, e in m.outputs.items():
        lines.append(f"{y}(t) = {expr_to_text(e, timed)}")
    if m.known_ics:
        lines.append("ic:")
        for s in m.states:
            if s in m.known_ics:
                v = m.known_ics[s]
                text = _fmt_fraction(v) if v >= 0 else "-" + _fmt_fraction(-v)
                lines.append(f"{s}(0) = {text}")
    return "\n".join(lines) + "\n"


def iter_subexprs(e: Expr) -> Iterator[Expr]:
    yield e
    if isinstance(e, Neg):
        yield from iter_subexprs(e.operand)
    elif isinstance(e, BinOp):
        yield from iter_subexprs(e.left)
        yield from iter_subexprs(e.right)
    elif isinstance(e, Pow):
        yield from iter_subexprs(e.base)

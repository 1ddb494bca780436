"""Evaluation of expression ASTs over any ring adaptor."""
from __future__ import annotations

from typing import Mapping

from ..dsl import BinOp, Neg, Num, Pow, Sym


def eval_expr(e, env: Mapping[str, object], ring):
    """Evaluate ``e`` with symbols bound by ``env``; arithmetic done by ``ring``.

    Division goes through ``ring.div`` and so propagates its zero-division
    errors (``DenominatorZero`` in the field-based rings).
    """
    if isinstance(e, Num):
        return ring.from_fraction(e.value)
    if isinstance(e, Sym):
        try:
            return env[e.name]
        except KeyError:
            raise KeyError(f"unbound symbol {e.name!r}") from None
    if isinstance(e, Neg):
        return ring.neg(eval_expr(e.operand, env, ring))
    if isinstance(e, Pow):
        return ring.pow(eval_expr(e.base, env, ring), e.exponent)
    a = eval_expr(e.left, env, ring)
    b = eval_expr(e.right, env, ring)
    if e.op == "+":
        return ring.add(a, b)
    if e.op == "-":
        return ring.sub(a, b)
    if e.op == "*":
        return ring.mul(a, b)
    return ring.div(a, b)

"""Truncated Taylor expansion of model outputs by Picard iteration."""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Mapping, Sequence

from .evaluate import eval_expr
from .field import GF_P, PrimeField
from .jet import JetRing
from .series import JetSeries, SeriesRing

MAX_RESAMPLES = 5


@dataclass(frozen=True)
class SamplePoint:
    """Values for the unknowns plus Taylor coefficients of every input."""

    values: Mapping[str, int]
    input_coeffs: Mapping[str, tuple[int, ...]]


def default_order(model) -> int:
    return model.n_unknowns + 1


def unknown_names(model) -> tuple[str, ...]:
    return tuple(model.unknown_states) + tuple(model.params)


def sample_point(model, rng: random.Random, order: int,
                 field: PrimeField = GF_P) -> SamplePoint:
    values = {u: field.random_nonzero(rng) for u in unknown_names(model)}
    inputs = {u: tuple(field.random_nonzero(rng) for _ in range(order))
              for u in model.inputs}
    return SamplePoint(values, inputs)


def taylor_expand(model, base, order: int, init: Mapping[str, object],
                  params: Mapping[str, object],
                  input_coeffs: Mapping[str, Sequence[object]]) -> dict[str, JetSeries]:
    """Output series over an arbitrary coefficient ring ``base``.

    Each sweep ``x <- x(0) + int f(x) dt`` fixes one more coefficient, so the
    working truncation grows by one per sweep until it reaches ``order``.
    """
    states = model.states
    x = {s: [init[s]] for s in states}
    for k in range(1, order + 1):
        ring = SeriesRing(base, k)
        env = {p: ring.const(v) for p, v in params.items()}
        for u in model.inputs:
            coeffs = list(input_coeffs[u])[:k]
            coeffs += [base.zero] * (k - len(coeffs))
            env[u] = JetSeries(coeffs)
        for s in states:
            cs = x[s] + [base.zero] * (k - len(x[s]))
            env[s] = JetSeries(cs)
        if k == order:
            return {y: eval_expr(g, env, ring) for y, g in model.outputs.items()}
        # one sweep at truncation k+1 only needs f(x) to k coefficients
        rhs = {s: eval_expr(model.state_rhs[s], env, ring) for s in states}
        f = base.field
        for s in states:
            nxt = [init[s]]
            for j in range(k):
                nxt.append(base.scale(rhs[s].coeffs[j], f.inv(f.from_int(j + 1))))
            x[s] = nxt
    raise AssertionError("unreachable")


def picard_expand(model, point: Mapping[str, int], order: int,
                  input_coeffs: Mapping[str, Sequence[int]] | None = None,
                  unknowns: Sequence[str] | None = None,
                  field: PrimeField = GF_P) -> dict[str, JetSeries]:
    """Output Taylor coefficients at ``t = 0`` as jets over the unknowns.

    Coefficient ``k`` of each series holds ``y^(k)(0) / k!`` and its gradient
    with respect to ``unknowns`` (default: unknown initial states, then
    parameters).  Known initial conditions contribute zero gradient.
    """
    if unknowns is None:
        unknowns = unknown_names(model)
    unknowns = tuple(unknowns)
    if model.inputs and input_coeffs is None:
        raise ValueError("input Taylor coefficients are required for models with inputs")
    jets = JetRing(len(unknowns), field)
    index = {u: i for i, u in enumerate(unknowns)}

    def jet(name):
        if name in index:
            return jets.variable(point[name], index[name])
        if name in point:
            return jets.const(point[name])
        return jets.from_fraction(model.known_ics[name])

    init = {s: jet(s) for s in model.states}
    params = {p: jet(p) for p in model.params}
    inputs = {u: [jets.const(c) for c in input_coeffs[u]] for u in model.inputs}
    return taylor_expand(model, jets, order, init, params, inputs)

"""Probabilistic local identifiability: rank of output-coefficient sensitivities.

Output Taylor coefficients are expanded as jets at a random point of a large
prime field.  An unknown is locally identifiable iff its unit vector lies in
the row space of the sensitivity matrix, which is checked by dropping its
column and watching the rank fall by one.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .algebra import GF_P, DenominatorZero, JetRing, PrimeField, eval_expr, picard_expand, rank
from .algebra.picard import MAX_RESAMPLES, SamplePoint, default_order, sample_point, unknown_names
from .dsl import ModelIR, expr_symbols, parse_expr
from .verdicts import AnalysisError, Verdict

DEFAULT_SEED = 20240917
DEFAULT_PROBABILITY = 0.99


@dataclass(frozen=True)
class UnknownSet:
    """Unknown initial states (model order) followed by parameters."""

    names: tuple[str, ...]

    @classmethod
    def of(cls, model: ModelIR) -> "UnknownSet":
        names = unknown_names(model)
        if not names:
            raise ValueError("model has no unknowns to assess")
        return cls(names)

    @property
    def index(self) -> dict[str, int]:
        return {n: i for i, n in enumerate(self.names)}

    def __len__(self):
        return len(self.names)

    def __iter__(self):
        return iter(self.names)


@dataclass(frozen=True)
class SensitivityMatrix:
    rows: tuple[tuple[int, ...], ...]
    row_labels: tuple[tuple[str, int], ...]
    unknowns: UnknownSet
    point: SamplePoint
    seed: int
    order: int
    field: PrimeField = GF_P

    @property
    def n_cols(self) -> int:
        return len(self.unknowns)

    def columns_without(self, j: int) -> list[list[int]]:
        return [list(r[:j] + r[j + 1:]) for r in self.rows]


@dataclass(frozen=True)
class LocalReport:
    verdicts: dict[str, Verdict]
    rank: int
    n_unknowns: int
    seed: int
    order: int
    probability: float = DEFAULT_PROBABILITY
    matrix: SensitivityMatrix | None = field(default=None, repr=False, compare=False)

    @property
    def identifiable(self) -> list[str]:
        return [u for u, v in self.verdicts.items() if v is Verdict.LOCALLY]


def _seed_rng(seed: int, salt: str = "") -> random.Random:
    return random.Random(f"{seed}:{salt}")


def sample_with_retries(model: ModelIR, seed: int, order: int, build, field: PrimeField = GF_P):
    """Call ``build(point)`` on fresh sample points until no denominator vanishes."""
    rng = _seed_rng(seed, "point")
    last = None
    for _ in range(1 + MAX_RESAMPLES):
        point = sample_point(model, rng, order, field)
        try:
            return point, build(point)
        except DenominatorZero as exc:
            last = exc
    raise AnalysisError(
        f"denominator vanished at {1 + MAX_RESAMPLES} consecutive sample points ({last})")


def sensitivity_matrix(model: ModelIR, seed: int = DEFAULT_SEED, order: int | None = None,
                       field: PrimeField = GF_P) -> SensitivityMatrix:
    unknowns = UnknownSet.of(model)
    order = order or default_order(model)

    def build(point: SamplePoint):
        series = picard_expand(model, point.values, order, point.input_coeffs,
                               unknowns.names, field)
        rows, labels = [], []
        for y in model.outputs:
            for k, c in enumerate(series[y].coeffs):
                rows.append(c.grad)
                labels.append((y, k))
        return rows, labels

    point, (rows, labels) = sample_with_retries(model, seed, order, build, field)
    return SensitivityMatrix(tuple(tuple(r) for r in rows), tuple(labels), unknowns,
                             point, seed, order, field)


def assess_local(model: ModelIR, seed: int = DEFAULT_SEED, order: int | None = None,
                 field: PrimeField = GF_P) -> LocalReport:
    M = sensitivity_matrix(model, seed, order, field)
    p = field.p
    r = rank(M.rows, p)
    verdicts = {}
    for j, name in enumerate(M.unknowns):
        rj = rank(M.columns_without(j), p)
        verdicts[name] = Verdict.LOCALLY if rj == r - 1 else Verdict.NONIDENTIFIABLE
    return LocalReport(verdicts, r, len(M.unknowns), seed, M.order, DEFAULT_PROBABILITY, M)


def as_expr(phi):
    """Accept either an AST or expression text such as ``"a01 + a12"``."""
    if isinstance(phi, str):
        return parse_expr(phi)[0]
    return phi


def function_gradient(model: ModelIR, phi, M: SensitivityMatrix) -> list[int]:
    phi = as_expr(phi)
    unknowns = M.unknowns
    extra = expr_symbols(phi) - set(unknowns.names)
    if extra:
        raise ValueError(f"function refers to non-unknown symbols: {sorted(extra)}")
    jets = JetRing(len(unknowns), M.field)
    env = {u: jets.variable(M.point.values[u], i) for i, u in enumerate(unknowns.names)}
    return list(eval_expr(phi, env, jets).grad)


def check_function_local(model: ModelIR, phi, seed: int = DEFAULT_SEED,
                         order: int | None = None,
                         matrix: SensitivityMatrix | None = None) -> Verdict:
    """``LOCALLY`` iff the gradient of ``phi`` lies in the sensitivity row space."""
    M = matrix if matrix is not None else sensitivity_matrix(model, seed, order)
    grad = function_gradient(model, phi, M)
    p = M.field.p
    r = rank(M.rows, p)
    return Verdict.LOCALLY if rank(list(M.rows) + [grad], p) == r else Verdict.NONIDENTIFIABLE


def check_functions_local(model: ModelIR, phis: Sequence, seeds: Sequence[int]) -> list[Verdict]:
    """Multi-seed check; a function is identifiable only if every seed agrees."""
    mats = [sensitivity_matrix(model, s) for s in seeds]
    out = []
    for phi in phis:
        ok = all(check_function_local(model, phi, matrix=M) is Verdict.LOCALLY for M in mats)
        out.append(Verdict.LOCALLY if ok else Verdict.NONIDENTIFIABLE)
    return out

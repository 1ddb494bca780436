"""Identifiable parameter combinations by generate-and-test.

Candidates from a fixed family (single parameters, pairwise sums, products
and ratios, low-degree monomials, plus user expressions) are certified when
their gradient lies in the row space of the sensitivity matrix at every
seed.  Survivors are then thinned greedily to a gradient-independent set.
The result is a heuristic generating set, not a complete one.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from .algebra import IncrementalRank, kernel_basis as _kernel
from .algebra.linalg import rank
from .dsl import BinOp, ModelIR, Pow, Sym, expr_to_text
from .local import DEFAULT_SEED, SensitivityMatrix, UnknownSet, as_expr, function_gradient, sensitivity_matrix
from .verdicts import Verdict

DEFAULT_SEEDS = (DEFAULT_SEED, DEFAULT_SEED + 1, DEFAULT_SEED + 2)


@dataclass(frozen=True)
class KernelBasis:
    vectors: tuple[tuple[int, ...], ...]
    unknowns: UnknownSet

    @property
    def dim(self) -> int:
        return len(self.vectors)

    def support(self) -> set[str]:
        return {u for v in self.vectors for u, x in zip(self.unknowns.names, v) if x}


def kernel_basis(M: SensitivityMatrix) -> KernelBasis:
    vecs = _kernel([list(r) for r in M.rows], M.n_cols, M.field.p)
    return KernelBasis(tuple(tuple(v) for v in vecs), M.unknowns)


@dataclass
class Combination:
    expr: object
    text: str
    family: str
    seeds: tuple[int, ...]


@dataclass
class CombosReport:
    functions: list[Combination]
    certified: list[Combination]
    candidate_family: str
    target_rank: int
    kernel_dim: int
    seeds: tuple[int, ...]
    completeness: str = "heuristic"
    shortfall: bool = False

    @property
    def texts(self) -> list[str]:
        return [c.text for c in self.functions]


def candidate_family(params: Sequence[str], degree_bound: int = 2) -> list[tuple[str, object]]:
    """``(family label, expression)`` pairs in the order they are tried."""
    out: list[tuple[str, object]] = []
    syms = [Sym(p) for p in params]
    out += [("single", s) for s in syms]
    pairs = list(itertools.combinations(syms, 2))
    out += [("sum", BinOp("+", a, b)) for a, b in pairs]
    out += [("product", BinOp("*", a, b)) for a, b in pairs]
    out += [("ratio", BinOp("/", a, b)) for a, b in itertools.permutations(syms, 2)]
    for deg in range(2, degree_bound + 1):
        for combo in itertools.combinations_with_replacement(range(len(syms)), deg):
            if deg == 2 and len(set(combo)) == 2:
                continue  # already listed as a product
            counts: dict[int, int] = {}
            for i in combo:
                counts[i] = counts.get(i, 0) + 1
            node = None
            for i, k in counts.items():
                term = syms[i] if k == 1 else Pow(syms[i], k)
                node = term if node is None else BinOp("*", node, term)
            out.append(("monomial", node))
    return out


def _state_rank(M: SensitivityMatrix, n_states: int) -> int:
    return rank([list(r[:n_states]) for r in M.rows], M.field.p)


def find_identifiable_combinations(model: ModelIR, degree_bound: int = 2,
                                   seeds: Sequence[int] = DEFAULT_SEEDS,
                                   extra: Sequence = ()) -> CombosReport:
    if len(seeds) < 1:
        raise ValueError("at least one seed is required")
    seeds = tuple(seeds)
    mats = [sensitivity_matrix(model, s) for s in seeds]
    spaces = []
    for M in mats:
        ir = IncrementalRank(M.field.p)
        for r in M.rows:
            ir.add(r)
        spaces.append(ir)

    n_states = len(model.unknown_states)
    r0 = spaces[0].rank
    target = r0 - _state_rank(mats[0], n_states)
    kdim = mats[0].n_cols - r0

    family = candidate_family(model.params, degree_bound)
    family += [("user", as_expr(e)) for e in extra]
    timed = set(model.states) | set(model.inputs)

    certified: list[tuple[Combination, list[int]]] = []
    seen_text = set()
    for label, expr in family:
        text = expr_to_text(expr, timed)
        if text in seen_text:
            continue
        seen_text.add(text)
        grads = []
        ok = True
        for M, space in zip(mats, spaces):
            g = function_gradient(model, expr, M)
            if not space.contains(g):
                ok = False
                break
            grads.append(g)
        if ok:
            certified.append((Combination(expr, text, label, seeds), grads[0]))

    chosen = []
    indep = IncrementalRank(mats[0].field.p)
    for combo, g in certified:
        if indep.rank >= target:
            break
        if indep.add(g):
            chosen.append(combo)

    return CombosReport(
        functions=chosen,
        certified=[c for c, _ in certified],
        candidate_family=(f"single, pairwise sum/product/ratio, monomials of degree <= "
                          f"{degree_bound}" + (", user expressions" if extra else "")),
        target_rank=target,
        kernel_dim=kdim,
        seeds=seeds,
        shortfall=len(chosen) < target,
    )


def check_functions(model: ModelIR, phis: Sequence, seeds: Sequence[int] = DEFAULT_SEEDS
                    ) -> list[Verdict]:
    """Multi-seed certificate for each function (``LOCALLY`` or ``NONIDENTIFIABLE``)."""
    mats = [sensitivity_matrix(model, s) for s in seeds]
    spaces = []
    for M in mats:
        ir = IncrementalRank(M.field.p)
        for r in M.rows:
            ir.add(r)
        spaces.append(ir)
    out = []
    for phi in phis:
        phi = as_expr(phi)
        ok = all(space.contains(function_gradient(model, phi, M))
                 for M, space in zip(mats, spaces))
        out.append(Verdict.LOCALLY if ok else Verdict.NONIDENTIFIABLE)
    return out

"""Global identifiability from a sampled polynomial system.

The output Taylor coefficients are expanded symbolically in the unknowns,
equated to their values at a random ground-truth point, and the resulting
ideal is analysed with a Gröbner basis.  The degree of each unknown's minimal
polynomial modulo the ideal counts how many values are compatible with the
sampled output data: 1 means global, finite > 1 local only, none means
non-identifiable.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Mapping

from .algebra import GF_P, DenominatorZero, PolyRing, PrimeField, RationalFunctionRing, taylor_expand
from .algebra.picard import SamplePoint, default_order
from .algebra.poly import NotPolynomial, RationalFunction, SparsePoly
from .dsl import ModelIR
from .groebner import INFINITE, Budget, GroebnerBasis, buchberger, minimal_poly_degree
from .local import DEFAULT_SEED, UnknownSet, assess_local, sample_with_retries
from .verdicts import AnalysisError, BudgetExceeded, Verdict

DEFAULT_MONOMIAL_BUDGET = 200_000
DEFAULT_TIMEOUT = 60.0
# a pure-power leading monomial does not force a univariate relation when the
# ideal is positive-dimensional, so the search is kept short there
POSITIVE_DIM_DEGREE_CAP = 64


@dataclass
class PolySystem:
    variables: tuple[str, ...]  # unknowns, then saturation variables
    generators: list[dict]
    unknowns: UnknownSet
    point: SamplePoint
    seed: int
    order: int
    field: PrimeField = GF_P

    @property
    def n_saturation(self) -> int:
        return len(self.variables) - len(self.unknowns)


@dataclass
class GlobalReport:
    verdicts: dict[str, Verdict]
    degrees: dict[str, float | None]
    seed: int
    order: int
    timings: dict[str, float] = field(default_factory=dict)
    timed_out: bool = False
    reason: str | None = None
    basis: GroebnerBasis | None = field(default=None, repr=False)
    system: PolySystem | None = field(default=None, repr=False)


def _expand(model: ModelIR, unknowns: UnknownSet, point: SamplePoint, order: int,
            field: PrimeField, rational: bool):
    polys = PolyRing(field, unknowns.names)
    base = RationalFunctionRing(polys) if rational else polys
    gen = base.gen
    init = {}
    for s in model.states:
        if s in model.known_ics:
            init[s] = base.from_fraction(model.known_ics[s])
        else:
            init[s] = gen(s)
    params = {p: gen(p) for p in model.params}
    inputs = {u: [base.const(c) for c in point.input_coeffs[u]] for u in model.inputs}
    return polys, taylor_expand(model, base, order, init, params, inputs)


def build_identifiability_system(model: ModelIR, seed: int = DEFAULT_SEED,
                                 order: int | None = None, field: PrimeField = GF_P,
                                 max_monomials: int | None = DEFAULT_MONOMIAL_BUDGET
                                 ) -> PolySystem:
    """Generators ``num(c_k) - v_k * den(c_k)`` plus ``z * den - 1`` per denominator."""
    unknowns = UnknownSet.of(model)
    order = order or default_order(model)

    def build(point: SamplePoint):
        try:
            polys, series = _expand(model, unknowns, point, order, field, rational=False)
        except NotPolynomial:
            polys, series = _expand(model, unknowns, point, order, field, rational=True)
        values = [point.values[u] for u in unknowns.names]
        coeffs = []
        for y in model.outputs:
            for c in series[y].coeffs:
                if isinstance(c, RationalFunction):
                    num, den = c.num, c.den
                else:
                    num, den = c, polys.one
                dv = polys.evaluate(den, values)
                if dv == 0:
                    raise DenominatorZero("coefficient denominator vanishes at sample")
                coeffs.append((num, den, polys.evaluate(num, values) * pow(dv, -1, field.p)
                               % field.p))
        return polys, coeffs

    point, (polys, coeffs) = sample_with_retries(model, seed, order, build, field)
    p = field.p
    L = len(unknowns)
    dens: list[SparsePoly] = []
    gens: list[dict] = []
    total = 0
    for num, den, v in coeffs:
        g = polys.sub(num, polys.scale(den, v))
        total += len(g)
        if max_monomials is not None and total > max_monomials:
            raise BudgetExceeded(f"expanded system exceeds {max_monomials} monomials")
        if g.terms:
            gens.append(g.terms)
        if not polys.is_const(den) and den not in dens:
            dens.append(den)
    nz = len(dens)
    gens = [{e + (0,) * nz: c for e, c in g.items()} for g in gens]
    for i, den in enumerate(dens):
        zexp = tuple(1 if k == i else 0 for k in range(nz))
        sat = {e + zexp: c for e, c in den.terms.items()}
        one = (0,) * (L + nz)
        sat[one] = (sat.get(one, 0) - 1) % p
        gens.append(sat)
    names = unknowns.names + tuple(f"_z{i}" for i in range(nz))
    return PolySystem(names, gens, unknowns, point, seed, order, field)


def assess_global(model: ModelIR, seed: int = DEFAULT_SEED, order: int | None = None,
                  timeout: float | None = DEFAULT_TIMEOUT,
                  max_monomials: int | None = DEFAULT_MONOMIAL_BUDGET,
                  field: PrimeField = GF_P,
                  local_verdicts: Mapping[str, Verdict] | None = None) -> GlobalReport:
    """Classify every unknown; any budget breach yields ``UNDETERMINED``.

    Unknowns that are locally non-identifiable (computed here unless
    ``local_verdicts`` is given) skip the minimal-polynomial search.
    """
    order = order or default_order(model)
    unknowns = UnknownSet.of(model)
    budget = Budget.with_timeout(timeout, max_monomials=max_monomials)
    timings: dict[str, float] = {}
    undetermined = {u: Verdict.UNDETERMINED for u in unknowns}
    t0 = time.perf_counter()
    try:
        if timeout is not None and timeout <= 0:
            raise BudgetExceeded("zero time budget")
        system = build_identifiability_system(model, seed, order, field, max_monomials)
        timings["system"] = time.perf_counter() - t0
        budget.check_time()
        t1 = time.perf_counter()
        gb = buchberger(system.generators, len(system.variables), field, budget,
                        system.variables)
        timings["groebner"] = time.perf_counter() - t1
    except BudgetExceeded as exc:
        timings["total"] = time.perf_counter() - t0
        return GlobalReport(undetermined, {u: None for u in unknowns}, seed, order,
                            timings, timed_out=True, reason=str(exc))
    if gb.is_unit():
        raise AnalysisError("sampled polynomial system is inconsistent")
    if local_verdicts is None:
        local_verdicts = assess_local(model, seed, order, field).verdicts
    if not gb.is_zero_dimensional():
        cap = budget.max_quotient_dim
        budget.max_quotient_dim = (POSITIVE_DIM_DEGREE_CAP if cap is None
                                   else min(cap, POSITIVE_DIM_DEGREE_CAP))

    t2 = time.perf_counter()
    verdicts: dict[str, Verdict] = {}
    degrees: dict[str, float | None] = {}
    reason = None
    for i, u in enumerate(unknowns):
        if local_verdicts.get(u) is Verdict.NONIDENTIFIABLE:
            verdicts[u], degrees[u] = Verdict.NONIDENTIFIABLE, INFINITE
            continue
        try:
            d = minimal_poly_degree(i, gb, budget)
        except BudgetExceeded as exc:
            verdicts[u], degrees[u] = Verdict.UNDETERMINED, None
            reason = f"{u}: {exc}"
            continue
        degrees[u] = d
        if d == INFINITE:
            verdicts[u] = Verdict.NONIDENTIFIABLE
        elif d == 1:
            verdicts[u] = Verdict.GLOBALLY
        else:
            verdicts[u] = Verdict.LOCALLY
    timings["minimal_polynomials"] = time.perf_counter() - t2
    timings["total"] = time.perf_counter() - t0
    return GlobalReport(verdicts, degrees, seed, order, timings,
                        timed_out=reason is not None, reason=reason, basis=gb, system=system)


def merge_with_local(global_verdicts: Mapping[str, Verdict],
                     local_verdicts: Mapping[str, Verdict]) -> dict[str, Verdict]:
    """Fill ``UNDETERMINED`` global entries that the local layer already settles.

    A locally non-identifiable unknown has infinitely many admissible values,
    so it is non-identifiable globally as well.
    """
    out = {}
    for u, v in global_verdicts.items():
        if v is Verdict.UNDETERMINED and local_verdicts.get(u) is Verdict.NONIDENTIFIABLE:
            out[u] = Verdict.NONIDENTIFIABLE
        else:
            out[u] = v
    return out

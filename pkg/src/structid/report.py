"""The analysis pipeline and its serialisable report."""
from __future__ import annotations

import hashlib
import json
import math
import time
from dataclasses import dataclass, field
from typing import Sequence

from . import __version__
from .algebra.picard import default_order
from .combos import DEFAULT_SEEDS, find_identifiable_combinations
from .dsl import ModelIR, canonical_text
from .globalid import DEFAULT_MONOMIAL_BUDGET, DEFAULT_TIMEOUT, assess_global, merge_with_local
from .local import DEFAULT_PROBABILITY, DEFAULT_SEED, assess_local
from .verdicts import Verdict

SCHEMA_VERSION = 1
LEVELS = ("local", "global", "full")


def model_digest(m: ModelIR) -> str:
    return hashlib.sha256(canonical_text(m).encode("utf-8")).hexdigest()


@dataclass
class UnknownResult:
    name: str
    kind: str  # "state" (value at t = 0) or "param"
    local: str
    globally: str | None = None
    degree: int | str | None = None  # "infinite" when no minimal polynomial exists
    downgraded: bool = False

    def to_dict(self) -> dict:
        return {"name": self.name, "kind": self.kind, "local": self.local,
                "global": self.globally, "degree": self.degree,
                "downgraded": self.downgraded}

    @classmethod
    def from_dict(cls, d: dict) -> "UnknownResult":
        return cls(d["name"], d["kind"], d["local"], d["global"], d["degree"], d["downgraded"])


@dataclass
class AnalysisReport:
    digest: str
    model: dict
    level: str
    seed: int
    order: int
    unknowns: list[UnknownResult]
    probability: dict
    global_status: dict | None = None
    combinations: dict | None = None
    timings: dict[str, float] = field(default_factory=dict)
    tool_version: str = __version__
    schema_version: int = SCHEMA_VERSION

    def verdicts(self, layer: str = "local") -> dict[str, str]:
        key = "global" if layer == "global" else "local"
        return {u.name: u.to_dict()[key] for u in self.unknowns}

    def to_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "tool": {"name": "structid", "version": self.tool_version},
            "model": {"digest": self.digest, **self.model},
            "level": self.level,
            "seed": self.seed,
            "order": self.order,
            "probability": self.probability,
            "unknowns": [u.to_dict() for u in self.unknowns],
            "global": self.global_status,
            "combinations": self.combinations,
            "timings": self.timings,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "AnalysisReport":
        model = dict(d["model"])
        digest = model.pop("digest")
        return cls(
            digest=digest, model=model, level=d["level"], seed=d["seed"], order=d["order"],
            unknowns=[UnknownResult.from_dict(u) for u in d["unknowns"]],
            probability=d["probability"], global_status=d["global"],
            combinations=d["combinations"], timings=d["timings"],
            tool_version=d["tool"]["version"], schema_version=d["schema_version"],
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "AnalysisReport":
        return cls.from_dict(json.loads(text))

    def format_text(self) -> str:
        lines = [f"model    {self.digest[:16]}  ({', '.join(self.model['outputs'])} observed)",
                 f"seed     {self.seed}   order {self.order}   level {self.level}",
                 ""]
        show_global = self.global_status is not None
        head = f"{'unknown':<14}{'local':<18}"
        if show_global:
            head += f"{'global':<18}degree"
        lines.append(head)
        for u in self.unknowns:
            name = f"{u.name}(0)" if u.kind == "state" else u.name
            row = f"{name:<14}{u.local:<18}"
            if show_global:
                g = u.globally + (" *" if u.downgraded else "")
                deg = "" if u.degree is None else str(u.degree)
                row += f"{g:<18}{deg}"
            lines.append(row.rstrip())
        if show_global and self.global_status.get("reason"):
            lines.append("")
            lines.append(f"global layer: {self.global_status['status']} "
                         f"({self.global_status['reason']})")
            if any(u.downgraded for u in self.unknowns):
                lines.append("* global layer did not finish; the local verdict is reported")
        if self.combinations is not None:
            lines.append("")
            lines.append("identifiable combinations: "
                         + (", ".join(self.combinations["functions"]) or "(none)"))
            if self.combinations["shortfall"]:
                lines.append("  candidate family did not reach the identifiable rank "
                             f"{self.combinations['target_rank']}")
        lines.append("")
        lines.append(self.probability["statement"])
        return "\n".join(lines) + "\n"


def _degree(d) -> int | str | None:
    if d is None:
        return None
    return "infinite" if d == math.inf else int(d)


def _probability_statement(p: float, global_run: bool) -> str:
    s = (f"local verdicts hold with probability >= {p:g} over the random evaluation point "
         f"and prime field")
    if global_run:
        s += "; global verdicts are computed exactly at one random sample point"
    return s


def analyze(m: ModelIR, level: str = "local", seed: int = DEFAULT_SEED,
            order: int | None = None, timeout: float | None = DEFAULT_TIMEOUT,
            max_monomials: int | None = DEFAULT_MONOMIAL_BUDGET, degree_bound: int = 2,
            extra: Sequence = ()) -> AnalysisReport:
    """Run the local, global and combination stages up to ``level``."""
    if level not in LEVELS:
        raise ValueError(f"level must be one of {LEVELS}")
    order = order or default_order(m)
    timings: dict[str, float] = {}

    t = time.perf_counter()
    local = assess_local(m, seed, order)
    timings["local"] = time.perf_counter() - t
    states = set(m.unknown_states)
    results = [UnknownResult(u, "state" if u in states else "param", local.verdicts[u].value)
               for u in local.verdicts]

    global_status = None
    if level in ("global", "full"):
        t = time.perf_counter()
        rep = assess_global(m, seed, order, timeout=timeout, max_monomials=max_monomials,
                            local_verdicts=local.verdicts)
        timings["global"] = time.perf_counter() - t
        merged = merge_with_local(rep.verdicts, local.verdicts)
        n_undet = 0
        for r in results:
            g = merged[r.name]
            r.degree = _degree(rep.degrees.get(r.name))
            if g is Verdict.UNDETERMINED:
                n_undet += 1
                r.downgraded = True
                r.globally = Verdict.UNDETERMINED.value
            else:
                r.globally = g.value
        if n_undet == 0:
            status = "complete"
        elif n_undet == len(results) or rep.basis is None:
            status = "undetermined"
        else:
            status = "partial"
        global_status = {"status": status, "reason": rep.reason,
                         "resolved_by_groebner": rep.basis is not None}

    combinations = None
    if level == "full":
        t = time.perf_counter()
        seeds = tuple(seed + i for i in range(len(DEFAULT_SEEDS)))
        cr = find_identifiable_combinations(m, degree_bound=degree_bound, seeds=seeds,
                                            extra=extra)
        timings["combinations"] = time.perf_counter() - t
        combinations = {
            "functions": cr.texts,
            "certified": [c.text for c in cr.certified],
            "candidate_family": cr.candidate_family,
            "target_rank": cr.target_rank,
            "kernel_dim": cr.kernel_dim,
            "seeds": list(cr.seeds),
            "completeness": cr.completeness,
            "shortfall": cr.shortfall,
        }

    model = {
        "states": list(m.states), "params": list(m.params), "inputs": list(m.inputs),
        "outputs": list(m.outputs),
        "known_ics": {k: str(v) for k, v in m.known_ics.items()},
    }
    return AnalysisReport(
        digest=model_digest(m), model=model, level=level, seed=seed, order=order,
        unknowns=results,
        probability={"local": DEFAULT_PROBABILITY,
                     "statement": _probability_statement(DEFAULT_PROBABILITY,
                                                         global_status is not None)},
        global_status=global_status, combinations=combinations, timings=timings,
    )


def strip_timings(d: dict) -> dict:
    out = dict(d)
    out["timings"] = {}
    return out


__all__ = ["AnalysisReport", "UnknownResult", "SCHEMA_VERSION", "analyze", "model_digest",
           "strip_timings"]

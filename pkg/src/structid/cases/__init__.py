"""Vendored case-study models with expected verdicts and a regression runner.

Each case is a pair of files in ``data/``: ``<name>.ode`` holds the model
source and ``<name>.json`` the expectations::

    {
      "name": "sir",
      "title": "SIR",
      "variant": "y = beta*S*I",      # measurement scheme label
      "order": 2,                     # position in the corpus listing
      "level": "global",              # local | global | combos
      "global_feasible": true,        # global layer expected to finish
      "anchor": "...",                # where the expectation comes from
      "augments": "viral",            # optional: base case of an augmented scheme
      "expected": {
        "local": {"beta": "locally", ...},
        "global": {"beta": "globally", ...},   # optional
        "degrees": {"a01": 2},                 # optional minimal-polynomial degrees
        "combinations": ["beta", ...],         # must be certified by combos
        "unconstrained": ["beta_I"]            # unknowns with no stated verdict
      }
    }

Unknowns that appear in neither ``local`` nor ``global`` are not checked.
"""
from __future__ import annotations

import copy
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from importlib import resources

from ..combos import DEFAULT_SEEDS, check_functions, find_identifiable_combinations
from ..dsl import ModelIR, parse_model
from ..globalid import DEFAULT_TIMEOUT, assess_global
from ..local import DEFAULT_SEED, assess_local
from ..verdicts import Verdict

LEVELS = ("local", "global", "combos")


@dataclass
class CaseSpec:
    name: str
    title: str
    source: str
    variant: str
    level: str
    global_feasible: bool
    anchor: str
    expected_local: dict[str, Verdict]
    expected_global: dict[str, Verdict] = field(default_factory=dict)
    expected_degrees: dict[str, int] = field(default_factory=dict)
    expected_combinations: list[str] = field(default_factory=list)
    unconstrained: list[str] = field(default_factory=list)
    augments: str | None = None
    position: int = 0

    def __post_init__(self):
        if self.level not in LEVELS:
            raise ValueError(f"{self.name}: unknown level {self.level!r}")
        self.expected_local = {k: Verdict(v) for k, v in self.expected_local.items()}
        self.expected_global = {k: Verdict(v) for k, v in self.expected_global.items()}

    @property
    def model(self) -> ModelIR:
        return parse_model(self.source)

    @classmethod
    def from_json(cls, doc: dict, source: str) -> "CaseSpec":
        exp = doc["expected"]
        return cls(
            name=doc["name"], title=doc["title"], source=source, variant=doc["variant"],
            level=doc["level"], global_feasible=doc["global_feasible"], anchor=doc["anchor"],
            expected_local=exp["local"], expected_global=exp.get("global", {}),
            expected_degrees=exp.get("degrees", {}),
            expected_combinations=exp.get("combinations", []),
            unconstrained=exp.get("unconstrained", []),
            augments=doc.get("augments"), position=doc.get("order", 0),
        )


def corpus() -> list[CaseSpec]:
    """All vendored cases, in order of increasing model complexity."""
    data = resources.files(__name__) / "data"
    cases = []
    for entry in data.iterdir():
        if entry.name.endswith(".json"):
            doc = json.loads(entry.read_text())
            source = (data / f"{doc['name']}.ode").read_text()
            cases.append(CaseSpec.from_json(doc, source))
    return sorted(cases, key=lambda c: (c.position, c.name))


def get_case(name: str) -> CaseSpec:
    for c in corpus():
        if c.name == name:
            return c
    raise KeyError(name)


@dataclass
class Check:
    case: str
    stage: str
    item: str
    expected: str
    actual: str
    passed: bool
    anchor: str
    note: str = ""


@dataclass
class RegressionReport:
    level: str
    checks: list[Check]
    logged: list[str]
    timings: dict[str, float]

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    @property
    def downgrades(self) -> list[Check]:
        return [c for c in self.checks if c.note == "downgraded"]

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {
            "level": self.level,
            "passed": self.passed,
            "checks": [vars(c) for c in self.checks],
            "logged": self.logged,
            "timings": self.timings,
        }

    def format(self) -> str:
        lines = []
        for c in self.checks:
            mark = "PASS" if c.passed else "FAIL"
            extra = f" ({c.note})" if c.note else ""
            lines.append(f"{mark}  {c.case:<16} {c.stage:<7} {c.item:<12} "
                         f"expected {c.expected:<16} got {c.actual}{extra}")
            if not c.passed:
                lines.append(f"      anchor: {c.anchor}")
        for msg in self.logged:
            lines.append(f"note  {msg}")
        n = len(self.checks)
        lines.append(f"{n - len(self.failures)}/{n} checks passed"
                     + (f", {len(self.downgrades)} downgraded" if self.downgrades else ""))
        return "\n".join(lines)


def _project_local(v: Verdict) -> Verdict:
    return Verdict.LOCALLY if v.identifiable else v


def _run_case(case: CaseSpec, level: str, timeout: float | None, seed: int,
              seeds: tuple[int, ...]) -> tuple[list[Check], list[str], float]:
    t0 = time.perf_counter()
    m = case.model
    checks: list[Check] = []
    logged: list[str] = []

    def add(stage, item, expected, actual, passed, note=""):
        checks.append(Check(case.name, stage, item, str(expected), str(actual), passed,
                            case.anchor, note))

    local = assess_local(m, seed)
    for u, exp in case.expected_local.items():
        got = local.verdicts.get(u)
        add("local", u, _project_local(exp), got, got is _project_local(exp))
    for u in case.unconstrained:
        logged.append(f"{case.name}: {u} unconstrained, local verdict {local.verdicts.get(u)}")

    if level in ("global", "combos") and case.expected_global:
        rep = assess_global(m, seed, timeout=timeout, local_verdicts=local.verdicts)
        for u, exp in case.expected_global.items():
            got = rep.verdicts[u]
            if got is Verdict.UNDETERMINED:
                if level == "global" and case.global_feasible:
                    add("global", u, exp, got, False, rep.reason or "")
                else:
                    ok = _project_local(exp) is local.verdicts[u]
                    add("global", u, exp, f"{got} -> {local.verdicts[u]}", ok, "downgraded")
                continue
            add("global", u, exp, got, got is exp)
        for u, d in case.expected_degrees.items():
            got = rep.degrees.get(u)
            if got is None:
                add("degree", u, d, "undetermined", not case.global_feasible, "downgraded")
            else:
                add("degree", u, d, got, got == d)

    if level == "combos" and case.expected_combinations:
        found = find_identifiable_combinations(m, seeds=seeds)
        certified = {c.text for c in found.certified}
        ok = check_functions(m, case.expected_combinations, seeds)
        for text, v in zip(case.expected_combinations, ok):
            canon = text.replace(" ", "")
            hit = v is Verdict.LOCALLY
            note = "" if canon in {c.replace(" ", "") for c in certified} else "not in family"
            add("combos", text, "identifiable", "identifiable" if hit else "nonidentifiable",
                hit, note if hit else "")
    return checks, logged, time.perf_counter() - t0


def run_regression(level: str = "local", timeout: float | None = DEFAULT_TIMEOUT,
                   cases: list[CaseSpec] | None = None, seed: int = DEFAULT_SEED,
                   seeds: tuple[int, ...] = DEFAULT_SEEDS, workers: int = 1
                   ) -> RegressionReport:
    """Run every case up to ``level`` and compare with its expectations.

    At ``local`` level only local verdicts are compared.  ``global`` adds the
    global verdicts and minimal-polynomial degrees; an undetermined global
    verdict fails only for a global-feasible case and otherwise falls back to
    the local verdict with a ``downgraded`` note.  ``combos`` additionally
    certifies the expected combinations and never fails on timeouts.
    """
    if level not in LEVELS:
        raise ValueError(f"level must be one of {LEVELS}")
    cases = sorted(cases if cases is not None else corpus(), key=lambda c: c.name)
    args = [(c, level, timeout, seed, tuple(seeds)) for c in cases]
    if workers > 1:
        with ProcessPoolExecutor(workers) as ex:
            results = list(ex.map(_run_case_star, args))
    else:
        results = [_run_case(*a) for a in args]
    checks, logged, timings = [], [], {}
    for c, (ch, lg, dt) in zip(cases, results):
        checks += ch
        logged += lg
        timings[c.name] = dt
    return RegressionReport(level, checks, logged, timings)


def _run_case_star(a):
    return _run_case(*a)


def tampered(case: CaseSpec, unknown: str) -> CaseSpec:
    """Copy of ``case`` with one expected local verdict flipped."""
    c = copy.deepcopy(case)
    v = c.expected_local[unknown]
    c.expected_local[unknown] = (Verdict.NONIDENTIFIABLE if v.identifiable
                                 else Verdict.LOCALLY)
    return c

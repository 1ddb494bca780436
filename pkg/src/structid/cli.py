"""Command-line interface: ``structid analyze | funcs | simulate | cases``.

Exit codes: 0 success, 2 unreadable or malformed input, 3 analysis failure,
4 global stage timed out with no result.  The global-stage budget may be set
with the ``STRUCTID_TIMEOUT`` (seconds) and ``STRUCTID_MAX_MONOMIALS``
environment variables; command-line flags take precedence.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__
from .algebra import DenominatorZero
from .combos import DEFAULT_SEEDS, check_functions
from .dsl import ModelSyntaxError, parse_expr, parse_model
from .globalid import DEFAULT_MONOMIAL_BUDGET, DEFAULT_TIMEOUT
from .local import DEFAULT_SEED
from .numeric import IntegrationError, integrate, trajectory_csv
from .report import analyze
from .verdicts import AnalysisError, Verdict

EXIT_OK, EXIT_INPUT, EXIT_ANALYSIS, EXIT_TIMEOUT = 0, 2, 3, 4


class InputError(Exception):
    pass


def _env_float(name: str, default):
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return default
    try:
        return float(raw)
    except ValueError:
        raise InputError(f"{name} must be a number, got {raw!r}") from None


def _budgets(args) -> tuple[float | None, int | None]:
    timeout = args.timeout if args.timeout is not None else _env_float(
        "STRUCTID_TIMEOUT", DEFAULT_TIMEOUT)
    mono = _env_float("STRUCTID_MAX_MONOMIALS", DEFAULT_MONOMIAL_BUDGET)
    return timeout, None if mono is None or mono <= 0 else int(mono)


def _load(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return parse_model(text)
    except ModelSyntaxError as exc:
        raise InputError(f"{path}:{exc}") from None


def _bindings(items, what: str) -> dict[str, float]:
    out = {}
    for item in items or []:
        for part in item.split(","):
            part = part.strip()
            if not part:
                continue
            name, sep, value = part.partition("=")
            if not sep:
                raise InputError(f"{what} binding {part!r} is not of the form name=value")
            try:
                out[name.strip()] = float(value)
            except ValueError:
                raise InputError(f"{what} {name.strip()}: {value!r} is not a number") from None
    return out


def cmd_analyze(args) -> int:
    m = _load(args.path)
    timeout, mono = _budgets(args)
    rep = analyze(m, args.level, args.seed, args.order, timeout, mono)
    print(rep.to_json() if args.json else rep.format_text(), end="")
    if rep.global_status and rep.global_status["status"] == "undetermined":
        print(f"global stage produced no result: {rep.global_status['reason']}",
              file=sys.stderr)
        return EXIT_TIMEOUT
    return EXIT_OK


def cmd_funcs(args) -> int:
    m = _load(args.path)
    texts = [t.strip() for t in args.check.split(",") if t.strip()]
    if not texts:
        raise InputError("--check needs at least one expression")
    exprs = []
    for t in texts:
        try:
            exprs.append(parse_expr(t)[0])
        except ModelSyntaxError as exc:
            raise InputError(f"in {t!r}: {exc}") from None
    seeds = tuple(args.seed + i for i in range(len(DEFAULT_SEEDS)))
    try:
        verdicts = check_functions(m, exprs, seeds)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    words = {Verdict.LOCALLY: "identifiable", Verdict.NONIDENTIFIABLE: "nonidentifiable"}
    if args.json:
        doc = {"seeds": list(seeds),
               "functions": [{"function": t, "verdict": words[v]} for t, v in zip(texts, verdicts)]}
        print(json.dumps(doc, indent=2, sort_keys=True))
    else:
        width = max(len(t) for t in texts)
        for t, v in zip(texts, verdicts):
            print(f"{t:<{width}}  {words[v]}")
    return EXIT_OK


def _tspan(text: str) -> tuple[float, float]:
    a, sep, b = text.partition(":")
    try:
        if not sep:
            raise ValueError
        return float(a), float(b)
    except ValueError:
        raise InputError(f"--tspan must look like a:b, got {text!r}") from None


def cmd_simulate(args) -> int:
    m = _load(args.path)
    params = _bindings(args.params, "parameter")
    ics = _bindings(args.ic, "initial condition")
    inputs = _bindings(args.input, "input")
    for name in params:
        if name not in m.params:
            raise InputError(f"{name} is not a parameter of this model")
    for name in ics:
        if name not in m.states:
            raise InputError(f"{name} is not a state of this model")
    missing = [p for p in m.params if p not in params]
    if missing:
        raise InputError(f"unbound parameter: {', '.join(missing)}")
    missing = [s for s in m.states if s not in ics and s not in m.known_ics]
    if missing:
        raise InputError(f"unbound initial condition: {', '.join(missing)}")
    try:
        traj = integrate(m, params, ics, _tspan(args.tspan), args.rtol, args.atol,
                         n_points=args.points, inputs=inputs)
    except (KeyError, ValueError) as exc:
        raise InputError(str(exc).strip("'\"")) from None
    text = trajectory_csv(traj)
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text, newline="")
    return EXIT_OK


def cmd_cases(args) -> int:
    from .cases import run_regression

    timeout, _ = _budgets(args)
    level = "combos" if args.level == "full" else args.level
    rep = run_regression(level, timeout=timeout, workers=args.workers)
    if args.json:
        print(json.dumps(rep.to_dict(), indent=2, sort_keys=True))
    else:
        print(rep.format())
    return EXIT_OK if rep.passed else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="structid",
                                 description="Structural identifiability of ODE models.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="local, global and combination analysis")
    a.add_argument("path")
    a.add_argument("--level", choices=("local", "global", "full"), default="local")
    a.add_argument("--seed", type=int, default=DEFAULT_SEED)
    a.add_argument("--order", type=int, default=None,
                   help="Taylor coefficients per output (default: unknowns + 1)")
    a.add_argument("--timeout", type=float, default=None,
                   help=f"global stage budget in seconds (default {DEFAULT_TIMEOUT:g})")
    a.add_argument("--json", action="store_true")
    a.set_defaults(func=cmd_analyze)

    f = sub.add_parser("funcs", help="test whether given functions are identifiable")
    f.add_argument("path")
    f.add_argument("--check", required=True, help='comma-separated, e.g. "a01+a12, a01*a12"')
    f.add_argument("--seed", type=int, default=DEFAULT_SEED)
    f.add_argument("--json", action="store_true")
    f.set_defaults(func=cmd_funcs)

    s = sub.add_parser("simulate", help="integrate the model and write output CSV")
    s.add_argument("path")
    s.add_argument("--params", nargs="*", default=[], metavar="NAME=VALUE")
    s.add_argument("--ic", nargs="*", default=[], metavar="STATE=VALUE")
    s.add_argument("--input", nargs="*", default=[], metavar="INPUT=VALUE",
                   help="constant input values (default 0)")
    s.add_argument("--tspan", required=True, metavar="A:B")
    s.add_argument("--points", type=int, default=201)
    s.add_argument("--rtol", type=float, default=1e-8)
    s.add_argument("--atol", type=float, default=1e-8)
    s.add_argument("--out", default=None, help="CSV path, or - for standard output")
    s.set_defaults(func=cmd_simulate)

    c = sub.add_parser("cases", help="regression over the bundled case studies")
    c.add_argument("--level", choices=("local", "global", "combos", "full"), default="local")
    c.add_argument("--timeout", type=float, default=None)
    c.add_argument("--workers", type=int, default=1)
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_cases)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (AnalysisError, DenominatorZero) as exc:
        print(f"analysis failed: {exc}", file=sys.stderr)
        return EXIT_ANALYSIS
    except IntegrationError as exc:
        print(f"integration failed: {exc}", file=sys.stderr)
        return EXIT_ANALYSIS


if __name__ == "__main__":
    sys.exit(main())

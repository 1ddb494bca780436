"""Floating-point integration and trajectory overlays.

Integration uses scipy's Dormand-Prince 5(4) pair (``RK45``) with its
4th-order dense output for sampling on a caller-chosen grid.
"""
from __future__ import annotations

import csv
import io
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

import numpy as np
from scipy.integrate import solve_ivp

from .dsl import BinOp, ModelIR, Neg, Num, Pow, Sym

DEFAULT_RTOL = 1e-8
DEFAULT_ATOL = 1e-8
FALSIFICATION_TOL = 1e-12


class IntegrationError(RuntimeError):
    def __init__(self, message: str, t_reached: float):
        super().__init__(f"{message} (reached t = {t_reached:g})")
        self.t_reached = t_reached


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    outputs: dict[str, np.ndarray]
    states: dict[str, np.ndarray]
    stats: dict[str, int] = field(default_factory=dict)


@dataclass(frozen=True)
class ComparisonReport:
    max_abs_diff: float
    argmax_time: float
    grids_identical: bool
    pairwise: tuple[tuple[float, ...], ...] = ()


def _py(e, names: Mapping[str, str]) -> str:
    if isinstance(e, Num):
        return repr(float(e.value))
    if isinstance(e, Sym):
        return names[e.name]
    if isinstance(e, Neg):
        return f"(-{_py(e.operand, names)})"
    if isinstance(e, Pow):
        return f"({_py(e.base, names)} ** {e.exponent})"
    return f"({_py(e.left, names)} {e.op} {_py(e.right, names)})"


def compile_model(m: ModelIR) -> tuple[Callable, Callable]:
    """Build ``rhs(t, x, theta, u)`` and ``out(x, theta, u)`` from the ASTs."""
    names = {}
    for i, s in enumerate(m.states):
        names[s] = f"x[{i}]"
    for i, p in enumerate(m.params):
        names[p] = f"th[{i}]"
    for i, u in enumerate(m.inputs):
        names[u] = f"u[{i}]"
    rhs_src = ", ".join(_py(m.state_rhs[s], names) for s in m.states)
    out_src = ", ".join(_py(g, names) for g in m.outputs.values())
    ns: dict = {}
    exec(f"def rhs(t, x, th, u):\n    return [{rhs_src}]\n"
         f"def out(x, th, u):\n    return [{out_src}]\n", {}, ns)
    return ns["rhs"], ns["out"]


def _input_fn(m: ModelIR, inputs: Mapping[str, float | Callable] | None):
    inputs = dict(inputs or {})
    unknown = set(inputs) - set(m.inputs)
    if unknown:
        raise KeyError(f"not an input of this model: {sorted(unknown)}")
    fns = []
    for u in m.inputs:
        v = inputs.get(u, 0.0)
        fns.append(v if callable(v) else (lambda t, c=float(v): c))
    return lambda t: [f(t) for f in fns]


def integrate(m: ModelIR, params: Mapping[str, float], ics: Mapping[str, float],
              tspan: tuple[float, float], rtol: float = DEFAULT_RTOL,
              atol: float = DEFAULT_ATOL, grid: Sequence[float] | None = None,
              n_points: int = 201, inputs: Mapping | None = None) -> Trajectory:
    missing = [p for p in m.params if p not in params]
    if missing:
        raise KeyError(f"unbound parameter(s): {', '.join(missing)}")
    x0 = []
    for s in m.states:
        if s in ics:
            x0.append(float(ics[s]))
        elif s in m.known_ics:
            x0.append(float(m.known_ics[s]))
        else:
            raise KeyError(f"unbound initial condition: {s}")
    t0, t1 = map(float, tspan)
    if not t1 > t0:
        raise ValueError("tspan must be increasing and non-degenerate")
    theta = [float(params[p]) for p in m.params]
    if not all(math.isfinite(v) for v in theta + x0):
        raise ValueError("parameters and initial conditions must be finite")
    grid = np.linspace(t0, t1, n_points) if grid is None else np.asarray(grid, float)
    if grid[0] < t0 or grid[-1] > t1 or np.any(np.diff(grid) <= 0):
        raise ValueError("grid must be strictly increasing inside tspan")

    rhs, out = compile_model(m)
    ufn = _input_fn(m, inputs)
    sol = solve_ivp(lambda t, x: rhs(t, x, theta, ufn(t)), (t0, t1), x0, method="RK45",
                    rtol=rtol, atol=atol, dense_output=True)
    if sol.status != 0:
        t_last = float(sol.t[-1]) if len(sol.t) else t0
        raise IntegrationError(sol.message, t_last)
    X = sol.sol(grid)
    Y = np.array([out(X[:, k], theta, ufn(t)) for k, t in enumerate(grid)]).T
    if not (np.all(np.isfinite(X)) and np.all(np.isfinite(Y))):
        raise IntegrationError("non-finite values in solution", float(sol.t[-1]))
    return Trajectory(
        times=grid,
        outputs={y: Y[i] for i, y in enumerate(m.outputs)},
        states={s: X[i] for i, s in enumerate(m.states)},
        stats={"steps": len(sol.t) - 1, "nfev": int(sol.nfev)},
    )


def compare(a: Trajectory, b: Trajectory) -> ComparisonReport:
    same = a.times.shape == b.times.shape and bool(np.all(a.times == b.times))
    if not same:
        raise ValueError("trajectories are on different grids")
    diff = np.max(np.abs(np.vstack([a.outputs[y] - b.outputs[y] for y in a.outputs])), axis=0)
    k = int(np.argmax(diff))
    return ComparisonReport(float(diff[k]), float(a.times[k]), same)


def _split(m: ModelIR, values: Mapping[str, float]):
    params = {k: v for k, v in values.items() if k in m.params}
    ics = {k: v for k, v in values.items() if k in m.states}
    inputs = {k: v for k, v in values.items() if k in m.inputs}
    extra = set(values) - set(params) - set(ics) - set(inputs)
    if extra:
        raise KeyError(f"unknown symbols: {sorted(extra)}")
    return params, ics, inputs


def falsification_demo(m: ModelIR, paramsets: Sequence[Mapping[str, float]],
                       tspan: tuple[float, float], n_points: int = 401,
                       rtol: float = FALSIFICATION_TOL, atol: float = FALSIFICATION_TOL,
                       common: Mapping[str, float] | None = None) -> ComparisonReport:
    """Integrate every parameter set on one grid and report the worst output gap.

    Each entry of ``paramsets`` may bind parameters, initial states and
    constant inputs; ``common`` supplies shared values.
    """
    if len(paramsets) < 2:
        raise ValueError("need at least two parameter sets")
    trajs = []
    for values in paramsets:
        params, ics, inputs = _split(m, {**(common or {}), **values})
        trajs.append(integrate(m, params, ics, tspan, rtol, atol, n_points=n_points,
                               inputs=inputs))
    n = len(trajs)
    pair = [[0.0] * n for _ in range(n)]
    worst = ComparisonReport(0.0, float(trajs[0].times[0]), True)
    for i, j in itertools.combinations(range(n), 2):
        c = compare(trajs[i], trajs[j])
        pair[i][j] = pair[j][i] = c.max_abs_diff
        if c.max_abs_diff > worst.max_abs_diff:
            worst = c
    return ComparisonReport(worst.max_abs_diff, worst.argmax_time, True,
                            tuple(tuple(r) for r in pair))


def trajectory_csv(traj: Trajectory) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(["time", *traj.outputs])
    for k, t in enumerate(traj.times):
        w.writerow([format(float(t), ".17g")]
                   + [format(float(v[k]), ".17g") for v in traj.outputs.values()])
    return buf.getvalue()


def read_trajectory_csv(text: str) -> tuple[list[str], np.ndarray]:
    rows = list(csv.reader(io.StringIO(text)))
    return rows[0], np.array([[float(x) for x in r] for r in rows[1:]])


def exact_rational_coefficients(m: ModelIR, params: Mapping[str, Fraction],
                                ics: Mapping[str, Fraction], order: int) -> dict[str, list]:
    """Output Taylor coefficients over the rationals at a concrete point."""
    from .algebra import QQ, taylor_expand

    init = {s: Fraction(ics[s]) if s in ics else Fraction(m.known_ics[s]) for s in m.states}
    theta = {p: Fraction(params[p]) for p in m.params}
    inputs = {u: [Fraction(0)] * order for u in m.inputs}
    series = taylor_expand(m, QQ, order, init, theta, inputs)
    return {y: list(s.coeffs) for y, s in series.items()}

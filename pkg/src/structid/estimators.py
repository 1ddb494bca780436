"""scikit-learn style wrappers around the analysis layers.

``fit`` takes a model (``ModelIR``, source text or a path to an ``.ode``
file) and stores results in trailing-underscore attributes; ``predict``
classifies functions of the unknowns against the fitted model.
"""
from __future__ import annotations

from pathlib import Path

from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .combos import DEFAULT_SEEDS, check_functions, find_identifiable_combinations
from .dsl import ModelIR, parse_model
from .globalid import DEFAULT_MONOMIAL_BUDGET, DEFAULT_TIMEOUT, assess_global, merge_with_local
from .local import DEFAULT_SEED, assess_local, check_function_local
from .verdicts import Verdict


def check_model(model) -> ModelIR:
    """Accept a ``ModelIR``, model source text or a path to a model file."""
    if isinstance(model, ModelIR):
        return model
    if isinstance(model, Path):
        return parse_model(model.read_text())
    if isinstance(model, str):
        if "\n" not in model and model.endswith(".ode") and Path(model).is_file():
            return parse_model(Path(model).read_text())
        return parse_model(model)
    raise TypeError(f"expected a model, model text or path, got {type(model).__name__}")


def _check_fitted(est, attr: str):
    if not hasattr(est, attr):
        raise NotFittedError(f"{type(est).__name__} is not fitted yet; call fit first")


class LocalIdentifiability(BaseEstimator):
    """Randomised rank test for local identifiability of each unknown."""

    def __init__(self, seed: int = DEFAULT_SEED, order: int | None = None):
        self.seed = seed
        self.order = order

    def fit(self, model, y=None):
        self.model_ = check_model(model)
        self.report_ = assess_local(self.model_, self.seed, self.order)
        self.verdicts_ = dict(self.report_.verdicts)
        self.rank_ = self.report_.rank
        return self

    def predict(self, functions) -> list[Verdict]:
        _check_fitted(self, "report_")
        return [check_function_local(self.model_, f, self.seed, matrix=self.report_.matrix)
                for f in functions]


class GlobalIdentifiability(BaseEstimator):
    """Gröbner-basis classification into global, local-only and non-identifiable."""

    def __init__(self, seed: int = DEFAULT_SEED, order: int | None = None,
                 timeout: float | None = DEFAULT_TIMEOUT,
                 max_monomials: int | None = DEFAULT_MONOMIAL_BUDGET):
        self.seed = seed
        self.order = order
        self.timeout = timeout
        self.max_monomials = max_monomials

    def fit(self, model, y=None):
        self.model_ = check_model(model)
        local = assess_local(self.model_, self.seed, self.order)
        self.report_ = assess_global(self.model_, self.seed, self.order, self.timeout,
                                     self.max_monomials, local_verdicts=local.verdicts)
        self.verdicts_ = merge_with_local(self.report_.verdicts, local.verdicts)
        self.degrees_ = dict(self.report_.degrees)
        return self


class IdentifiableCombinations(BaseEstimator):
    """Certified identifiable functions drawn from a fixed candidate family."""

    def __init__(self, degree_bound: int = 2, seeds: tuple[int, ...] = DEFAULT_SEEDS):
        self.degree_bound = degree_bound
        self.seeds = seeds

    def fit(self, model, y=None):
        self.model_ = check_model(model)
        self.report_ = find_identifiable_combinations(self.model_, self.degree_bound,
                                                      self.seeds)
        self.functions_ = self.report_.texts
        return self

    def predict(self, functions) -> list[Verdict]:
        _check_fitted(self, "report_")
        return check_functions(self.model_, functions, self.seeds)

from __future__ import annotations

import enum


class Verdict(str, enum.Enum):
    """Per-unknown classification; values double as the JSON vocabulary."""

    GLOBALLY = "globally"
    LOCALLY = "locally"
    NONIDENTIFIABLE = "nonidentifiable"
    UNDETERMINED = "undetermined"

    def __str__(self):
        return self.value

    @property
    def identifiable(self) -> bool:
        return self in (Verdict.GLOBALLY, Verdict.LOCALLY)


class AnalysisError(RuntimeError):
    """The analysis could not produce a verdict (e.g. repeated singular samples)."""


class BudgetExceeded(RuntimeError):
    """A monomial, pair, dimension or wall-clock budget was hit."""

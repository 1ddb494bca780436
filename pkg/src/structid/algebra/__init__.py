"""Exact arithmetic kernels: prime field, jets, series, polynomials, linear algebra."""
from .evaluate import eval_expr
from .field import GF_P, P, DenominatorZero, PrimeField, fp_inv
from .jet import JetRing, JetScalar
from .linalg import IncrementalRank, kernel_basis, rank, rref
from .picard import SamplePoint, picard_expand, sample_point, taylor_expand
from .poly import (QQ, PolyRing, RationalFunction, RationalFunctionRing, SparsePoly,
                   expr_to_rational_function)
from .series import JetSeries, SeriesRing, series_div, series_mul

__all__ = [
    "GF_P", "P", "DenominatorZero", "PrimeField", "fp_inv",
    "JetRing", "JetScalar", "JetSeries", "SeriesRing", "series_div", "series_mul",
    "QQ", "PolyRing", "RationalFunction", "RationalFunctionRing", "SparsePoly",
    "expr_to_rational_function", "eval_expr",
    "IncrementalRank", "kernel_basis", "rank", "rref",
    "SamplePoint", "picard_expand", "sample_point", "taylor_expand",
]

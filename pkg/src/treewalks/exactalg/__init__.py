"""Exact arithmetic: rationals, truncated series, Q[z][y]/(y^2-4+z^2), Sturm."""

from fractions import Fraction as Rational

from .algebraic import AlgElem, CAlg, EvenPoly, sturm_sign_constant, sturm_sequence
from .poly import Poly, poly_gcd, squarefree_odd_part
from .series import (
    ExactSeries,
    binomial_series,
    catalan,
    catalan_series,
    format_rational,
    ordinary_bell,
    parse_rational,
    poly_to_series,
    series_compose,
    series_reciprocal,
)

__all__ = [
    "Rational",
    "AlgElem",
    "CAlg",
    "EvenPoly",
    "ExactSeries",
    "Poly",
    "binomial_series",
    "catalan",
    "catalan_series",
    "format_rational",
    "ordinary_bell",
    "parse_rational",
    "poly_gcd",
    "poly_to_series",
    "series_compose",
    "series_reciprocal",
    "squarefree_odd_part",
    "sturm_sequence",
    "sturm_sign_constant",
]

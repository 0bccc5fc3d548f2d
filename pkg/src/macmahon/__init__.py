"""Exact and randomised verification of the beta-extended MacMahon Master
Theorem and its submatrix, partial-permutation and derangement variants."""

from .poly import GradedSeries, Polynomial, Variable, series_exp, series_log, truncate, var
from .theorems import VerificationReport

__all__ = ["GradedSeries", "Polynomial", "Variable", "VerificationReport",
           "series_exp", "series_log", "truncate", "var"]
__version__ = "0.1.0"

"""Steepest-descent asymptotics for the terms of the globally convergent
binomial series of the Riemann zeta function.

The terms

    A(n, s) = 2^{-n-1} / (1 - 2^{1-s}) * sum_k C(n, k) (-1)^k (k+1)^{-s}

are evaluated directly (binomial sum, rotated-ray quadrature) and through a
saddle-point expansion of their integral representation, with s = sigma + i*a*n.
"""

from .cnum import LogComplex, log_gamma, pow_principal, scaled_sum
from .direct import SeriesPoint, a_direct, a_quadrature, zeta_series
from .saddles import ContributoryRange, Saddle, contributory_range, saddle_string
from .sdexp import EvaluationReport, assemble
from .tracer import DescentPath, classify, detect_stokes, trace

__all__ = [
    "LogComplex",
    "log_gamma",
    "pow_principal",
    "scaled_sum",
    "SeriesPoint",
    "a_direct",
    "a_quadrature",
    "zeta_series",
    "Saddle",
    "ContributoryRange",
    "saddle_string",
    "contributory_range",
    "EvaluationReport",
    "assemble",
    "DescentPath",
    "trace",
    "classify",
    "detect_stokes",
]

__version__ = "0.1.0"

"""Recursive total least-squares adaptive filtering with DCD iterations.

Subpackages:
  linalg       small dense symmetric linear algebra
  signals      errors-in-variables stream generation
  stats        exponentially weighted second-order statistics
  dcd          the dichotomous coordinate-descent solver
  filters      DCD-RTLS, exact RTLS, RLS/BCRLS baselines, batch TLS oracle
  theory       closed-form performance predictors
  complexity   operation-count and gate-cost models
  experiments  Monte-Carlo harness and CSV emission
  cli          the `dcdrtls` command-line entry point
"""

from . import complexity, dcd, experiments, filters, linalg, signals, stats, theory
from .errors import (
    ConfigError,
    DegenerateDenominatorError,
    DivergentMomentsError,
    IllConditionedMinorComponentWarning,
    InvalidInputError,
    NonGenericTlsError,
    SingularMatrixError,
)

__all__ = [
    "complexity",
    "dcd",
    "experiments",
    "filters",
    "linalg",
    "signals",
    "stats",
    "theory",
    "ConfigError",
    "DegenerateDenominatorError",
    "DivergentMomentsError",
    "IllConditionedMinorComponentWarning",
    "InvalidInputError",
    "NonGenericTlsError",
    "SingularMatrixError",
]

__version__ = "0.1.0"

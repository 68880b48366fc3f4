"""Leading-element dichotomous coordinate-descent solver.

Solves phi @ d = p approximately using only sign tests, comparisons and
additions on a binary step-size ladder: the solution entries live on the
grid {k * H * 2^-M} inside [-H, H] and each successful coordinate update
moves the leading entry (largest |residual|) by +-alpha. Because alpha is
always a power of two times H, the d-updates are exact in binary floating
point, so this reproduces fixed-point ladder semantics.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .complexity import OpCounts
from .errors import ConfigError, InvalidInputError
from .kernels import dcd_kernel
from .linalg import as_sym_matrix, as_vector


@dataclass(frozen=True)
class DcdParams:
    """Design triple of the solver: N successful updates, M ladder bits,
    H amplitude range of the solution entries."""

    n_max: int
    m_bits: int
    h_range: float

    def __post_init__(self):
        if self.n_max < 1 or self.m_bits < 1:
            raise ConfigError("n_max and m_bits must be >= 1")
        if not self.h_range > 0:
            raise ConfigError("h_range must be positive")

    @property
    def add_budget_per_solve(self):
        """Worst-case additions for one fresh-ladder call, given L."""
        return lambda L: 2 * self.n_max * L + self.n_max + self.m_bits


@dataclass(frozen=True)
class DcdResult:
    d: np.ndarray
    r: np.ndarray
    updates_done: int
    halvings_done: int
    counts: OpCounts
    ladder_state: tuple[int, float]


def dcd_solve(
    phi,
    p,
    params: DcdParams,
    ladder_state: tuple[int, float] | None = None,
) -> DcdResult:
    """Run up to N coordinate updates of DCD on phi @ d = p.

    ladder_state, when given, warm-starts (eps, alpha) instead of the
    default per-call reset to (1, H/2); the returned state allows the
    caller to persist the ladder across calls.
    """
    phi = as_sym_matrix(phi)
    p = as_vector(p)
    if p.size != phi.shape[0]:
        raise InvalidInputError("right-hand side length does not match matrix")
    if np.any(np.diag(phi) <= 0.0):
        raise InvalidInputError("phi must have a strictly positive diagonal")
    if ladder_state is None:
        eps0, alpha0 = 1, 0.5 * params.h_range
    else:
        eps0, alpha0 = ladder_state
    d, r, updates, halvings, adds, eps, alpha = dcd_kernel(
        phi, p, params.n_max, params.m_bits, params.h_range, eps0, alpha0
    )
    return DcdResult(
        d=d,
        r=r,
        updates_done=updates,
        halvings_done=halvings,
        counts=OpCounts(mul=0, add=int(adds), div=0, sqrt=0),
        ladder_state=(int(eps), float(alpha)),
    )

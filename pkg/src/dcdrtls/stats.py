"""Exponentially weighted second-order statistics.

Tracks Phi_n = lam*Phi_{n-1} + x x', z_n = lam*z_{n-1} + y x and
tau_n = lam*tau_{n-1} + y^2, initialized from Phi_0 = delta*I. For
shift-structured regressors only the first column of Phi is recomputed;
the interior is a block copy of the previous matrix (see update_shift).

When the forgetting factor is chosen as lam = 1 - 2^-P, scaling by lam
can be realized as a subtract-and-shift (a - a*2^-P), which is
bit-identical to the direct multiplication in binary floating point and
is what the hardware cost model assumes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, InvalidInputError
from .linalg import as_vector


def lambda_from_p(p_exponent: int) -> float:
    """Exact forgetting factor 1 - 2^-P (P = 10 gives 0.9990234375)."""
    if p_exponent < 1:
        raise ConfigError("p_exponent must be a positive integer")
    return 1.0 - 2.0 ** (-p_exponent)


@dataclass
class Stats:
    phi: np.ndarray
    z: np.ndarray
    tau: float
    lam: float
    delta: float
    n: int = 0
    p_exponent: int | None = None
    # delta * lam^n, the surviving initialization term on the diagonal;
    # tracked so the shift-structured block copy can stay exactly
    # equivalent to the generic update (the copy rule is exact for the
    # data part of Phi but ages the delta*I term by one step too few).
    init_coeff: float = 0.0

    @property
    def L(self) -> int:
        return self.z.size


def init(L: int, lam: float, delta: float, p_exponent: int | None = None) -> Stats:
    """Fresh statistics: Phi = delta*I, z = 0, tau = 0."""
    if L < 1:
        raise InvalidInputError("L must be >= 1")
    if not 0.0 < lam <= 1.0:
        raise ConfigError("forgetting factor must lie in (0, 1]")
    if delta <= 0.0:
        raise ConfigError("delta must be positive")
    if p_exponent is not None and abs(lambda_from_p(p_exponent) - lam) > 1e-15:
        raise ConfigError("lam does not match 1 - 2^-p_exponent")
    return Stats(
        phi=delta * np.eye(L),
        z=np.zeros(L),
        tau=0.0,
        lam=lam,
        delta=delta,
        p_exponent=p_exponent,
        init_coeff=delta,
    )


def update_generic(s: Stats, x, y: float) -> Stats:
    """One step of the full recursions (arbitrary regressor). In place."""
    x = as_vector(x)
    if x.size != s.L:
        raise InvalidInputError("regressor length does not match state")
    s.phi *= s.lam
    s.phi += np.outer(x, x)
    s.z *= s.lam
    s.z += y * x
    s.tau = s.lam * s.tau + y * y
    s.init_coeff *= s.lam
    s.n += 1
    return s


def update_shift(s: Stats, x_new_scalar: float, x_window, y: float) -> Stats:
    """Shift-structured update of Phi: recompute the first column, copy the
    rest from the previous step, and re-age the delta*I initialization on
    the copied diagonal. Produces the same Phi as update_generic on the
    same data (up to round-off), touching only O(L) entries.
    """
    x = as_vector(x_window)
    if x.size != s.L:
        raise InvalidInputError("regressor length does not match state")
    if x[0] != x_new_scalar:
        raise InvalidInputError("window head does not match the new scalar sample")
    first = s.lam * s.phi[0, :] + x_new_scalar * x
    correction = s.init_coeff * (1.0 - s.lam)
    if s.L > 1:
        s.phi[1:, 1:] = s.phi[:-1, :-1].copy()
        if correction != 0.0:
            idx = np.arange(1, s.L)
            s.phi[idx, idx] -= correction
    s.phi[0, :] = first
    s.phi[:, 0] = first
    s.z *= s.lam
    s.z += y * x
    s.tau = s.lam * s.tau + y * y
    s.init_coeff *= s.lam
    s.n += 1
    return s


@dataclass(frozen=True)
class AugmentedStats:
    """The (L+1) x (L+1) weighted augmented covariance and its weighting."""

    psi: np.ndarray
    gamma: float


def assemble_psi(s: Stats, gamma: float) -> AugmentedStats:
    """Augmented covariance [Phi, g*z; g*z', g^2*tau] with g = gamma^-1/2."""
    if gamma <= 0.0:
        raise ConfigError("gamma must be positive")
    L = s.L
    psi = np.empty((L + 1, L + 1))
    psi[:L, :L] = s.phi
    border = gamma ** -0.5 * s.z
    psi[:L, L] = border
    psi[L, :L] = border
    psi[L, L] = s.tau / gamma
    return AugmentedStats(psi=psi, gamma=gamma)

"""Closed-form performance predictors for the exact RTLS recursion.

All quantities are functions of the ground truth (R, h), the noise
variances (eta, xi) and the forgetting factor, evaluated through the
symmetric eigensolver. They predict: the geometric rate of the mean
weight-error decay, the RLS bias the algorithm removes, the noise drive
and contraction matrix of the variance recursion, the forgetting-factor
bound for mean-square stability, and the transient and steady-state MSD.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DivergentMomentsError, InvalidInputError
from .linalg import as_sym_matrix, as_vector, is_spd, solve_spd, sym_eig, sym_sqrt, trace_inverse


@dataclass
class TheoryModel:
    R: np.ndarray
    h: np.ndarray
    eta: float
    xi: float
    lam: float
    gamma: float | None = None  # defaults to xi/eta when eta > 0

    def __post_init__(self):
        self.R = as_sym_matrix(self.R)
        self.h = as_vector(self.h)
        if self.R.shape[0] != self.h.size:
            raise InvalidInputError("R and h dimensions disagree")
        if self.eta < 0 or self.xi < 0:
            raise ConfigError("noise variances must be nonnegative")
        if not 0.0 < self.lam <= 1.0:
            raise ConfigError("forgetting factor must lie in (0, 1]")
        if not is_spd(self.R):
            raise InvalidInputError("R must be positive-definite")
        if self.gamma is None:
            if self.eta > 0:
                self.gamma = self.xi / self.eta
        elif self.eta > 0 and abs(self.gamma * self.eta - self.xi) > 1e-12 * max(self.xi, 1.0):
            raise ConfigError("gamma must equal xi/eta when eta > 0")

    @property
    def L(self) -> int:
        return self.h.size


def mean_convergence_rate(m: TheoryModel) -> float:
    """Spectral radius of the mean weight-error contraction,
    eta / (zeta_min{gamma^-1 R h h' + R} + eta); 0 when eta = 0.

    The matrix is not symmetric, but shares its (real, positive) spectrum
    with R^(1/2)(gamma^-1 h h' + I)R^(1/2), which is what we decompose.
    """
    if m.eta == 0.0:
        return 0.0
    rs = sym_sqrt(m.R)
    inner = np.outer(m.h, m.h) / m.gamma + np.eye(m.L)
    sym = rs @ inner @ rs
    zeta_min = float(np.abs(sym_eig(sym).eigenvalues[0]))
    return m.eta / (zeta_min + m.eta)


def rls_bias(m: TheoryModel) -> np.ndarray:
    """Asymptotic bias of conventional RLS: -eta (R + eta I)^-1 h."""
    if m.eta == 0.0:
        return np.zeros(m.L)
    return -m.eta * solve_spd(m.R + m.eta * np.eye(m.L), m.h)


def noise_drive_g(m: TheoryModel) -> float:
    """Drive constant of the variance recursion:
    tr{R^-2 [(eta ||h||^2 + xi)(R + eta I) + eta^2 h h']}."""
    r_inv2 = np.linalg.matrix_power(np.linalg.inv(m.R), 2)
    hh = np.outer(m.h, m.h)
    inner = (m.eta * float(m.h @ m.h) + m.xi) * (m.R + m.eta * np.eye(m.L)) + m.eta**2 * hh
    return float(np.trace(r_inv2 @ inner))


def s_bar(m: TheoryModel) -> np.ndarray:
    """Mean contraction matrix of the variance recursion:
    (1 - 2 lam + 2 lam^2) I + (1-lam)^2 (tr{R^-1} R - 2 eta R^-1 + eta^2 R^-2)."""
    r_inv = np.linalg.inv(m.R)
    lead = 1.0 - 2.0 * m.lam + 2.0 * m.lam**2
    tail = trace_inverse(m.R) * m.R - 2.0 * m.eta * r_inv + m.eta**2 * (r_inv @ r_inv)
    return lead * np.eye(m.L) + (1.0 - m.lam) ** 2 * tail


def s_bar_spectral_radius(m: TheoryModel) -> float:
    return float(np.abs(sym_eig(s_bar(m)).eigenvalues[-1]))


def stability_lambda_bound(m: TheoryModel) -> float:
    """Lower bound on the forgetting factor that guarantees mean-square
    stability: 1 - 2 / (tr{R^-1} zeta_max{R} + (1 - eta/zeta_min{R})^2 + 1)."""
    eig = sym_eig(m.R).eigenvalues
    zeta_min, zeta_max = float(np.abs(eig[0])), float(np.abs(eig[-1]))
    denom = trace_inverse(m.R) * zeta_max + (1.0 - m.eta / zeta_min) ** 2 + 1.0
    return 1.0 - 2.0 / denom


def transient_msd(msd_prev: float, m: TheoryModel) -> float:
    """One step of the scalar MSD recursion
    msd_n = (1 - 2 lam + 2 lam^2) msd_{n-1} + (1 - lam)^2 g.
    Iterating from msd_0 = ||h||^2 (the all-zero initial weights) yields a
    predicted learning curve."""
    if msd_prev < 0:
        raise InvalidInputError("msd_prev must be nonnegative")
    lead = 1.0 - 2.0 * m.lam + 2.0 * m.lam**2
    return lead * msd_prev + (1.0 - m.lam) ** 2 * noise_drive_g(m)


def predicted_msd_curve(m: TheoryModel, steps: int) -> np.ndarray:
    """The transient prediction iterated from ||h||^2, length `steps`."""
    lead = 1.0 - 2.0 * m.lam + 2.0 * m.lam**2
    drive = (1.0 - m.lam) ** 2 * noise_drive_g(m)
    out = np.empty(steps)
    msd = float(m.h @ m.h)
    for n in range(steps):
        msd = lead * msd + drive
        out[n] = msd
    return out


def steady_state_msd(m: TheoryModel) -> float:
    """Fixed point of the MSD recursion: ((1 - lam) / (2 lam)) * g.

    Algebraically equal to the usual gamma-weighted trace form for
    eta > 0 (using eta * gamma = xi) and well-defined in the eta -> 0
    limit with xi held fixed. Exactly 0 at lam = 1 (consistency).
    """
    return (1.0 - m.lam) / (2.0 * m.lam) * noise_drive_g(m)


def asymptotic_moments(m: TheoryModel):
    """Asymptotic means of the tracked statistics:
    ((1-lam)^-1 (R + eta I), (1-lam)^-1 R h, (1-lam)^-1 (h'Rh + xi))."""
    if m.lam == 1.0:
        raise DivergentMomentsError("asymptotic moments diverge at lam = 1")
    c = 1.0 / (1.0 - m.lam)
    phi_bar = c * (m.R + m.eta * np.eye(m.L))
    z_bar = c * (m.R @ m.h)
    tau_bar = c * (float(m.h @ m.R @ m.h) + m.xi)
    return phi_bar, z_bar, tau_bar

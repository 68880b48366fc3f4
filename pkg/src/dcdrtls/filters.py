"""Adaptive filter implementations and references.

- dcd_rtls_step: the production recursion (residual-recycled right-hand
  sides, two DCD solves per sample, rational weight combination), with
  per-step operation counters.
- exact_rtls_step_direct / exact_rtls_step_sm: the exact recursion solved
  densely, and its Sherman-Morrison form; cross-checks for each other and
  for the DCD path.
- rls_step / bcrls_step: conventional RLS and its bias-compensated form.
- batch_tls / inverse_power_reference: the minor-component route, used as
  a batch oracle.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from . import stats as stats_mod
from .complexity import OpCounts, step_cost_breakdown
from .dcd import DcdParams, DcdResult, dcd_solve
from .errors import (
    ConfigError,
    DegenerateDenominatorError,
    IllConditionedMinorComponentWarning,
    InvalidInputError,
    NonGenericTlsError,
    SingularMatrixError,
)
from .kernels import _phi_inv_update
from .linalg import as_sym_matrix, as_vector, solve_spd
from .stats import AugmentedStats, Stats


@dataclass
class FilterState:
    """Everything the DCD-RTLS recursion carries between samples."""

    stats: Stats
    m1: np.ndarray
    m2: np.ndarray
    r1: np.ndarray
    r2: np.ndarray
    w: np.ndarray        # w_n after a step (w_{n-1} on entry to the next)
    w_prev: np.ndarray   # w_{n-1} after a step (w_{n-2} on entry)
    gamma: float
    dcd: DcdParams
    structured: bool = False
    counts: OpCounts = field(default_factory=OpCounts)
    last_counts: OpCounts = field(default_factory=OpCounts)


def filter_init(
    L: int,
    lam: float,
    delta: float,
    gamma: float,
    dcd: DcdParams,
    p_exponent: int | None = None,
    structured: bool = False,
) -> FilterState:
    if gamma <= 0:
        raise ConfigError("gamma must be positive")
    z = np.zeros(L)
    return FilterState(
        stats=stats_mod.init(L, lam, delta, p_exponent),
        m1=z.copy(),
        m2=z.copy(),
        r1=z.copy(),
        r2=z.copy(),
        w=z.copy(),
        w_prev=z.copy(),
        gamma=gamma,
        dcd=dcd,
        structured=structured,
    )


def _step_counts(state: FilterState, solve1: DcdResult, solve2: DcdResult) -> OpCounts:
    """Assemble the per-step tally: fixed structural costs per stage, with
    the solver's actual (data-dependent) addition consumption.

    When lam is not of the 1 - 2^-P form, scaling by lam is a true
    multiplication and moves from the addition column to the
    multiplication column (phi/z/tau/p1/p2 rows)."""
    L = state.stats.L
    rows = step_cost_breakdown(L, state.dcd.n_max, state.dcd.m_bits, state.structured)
    rows["solve_1"] = solve1.counts
    rows["solve_2"] = solve2.counts
    total = OpCounts()
    for c in rows.values():
        total = total + c
    if state.stats.p_exponent is None:
        lam_scalings = (L if state.structured else (L * L + L) // 2) + L + 1 + L + L
        total = OpCounts(
            total.mul + lam_scalings, total.add - lam_scalings, total.div, total.sqrt
        )
    return total


def dcd_rtls_step(state: FilterState, x, y: float) -> FilterState:
    """One DCD-RTLS sample update (in place).

    In structured mode x must be the shifted window (new scalar first).
    """
    x = as_vector(x)
    s = state.stats
    if state.structured:
        stats_mod.update_shift(s, float(x[0]), x, y)
    else:
        stats_mod.update_generic(s, x, y)
    lam = s.lam
    e1 = y - x @ state.m1
    p1 = lam * state.r1 + e1 * x
    # on entry state.w holds w_{n-1} and state.w_prev holds w_{n-2}
    p2 = lam * (state.r2 - state.w_prev) + state.w - (x @ state.m2) * x
    res1 = dcd_solve(s.phi, p1, state.dcd)
    res2 = dcd_solve(s.phi, p2, state.dcd)
    state.m1 = state.m1 + res1.d
    state.m2 = state.m2 + res2.d
    state.r1 = res1.r
    state.r2 = res2.r
    k = state.m1 + (s.tau / state.gamma) * state.m2
    denom = state.gamma + float(s.z @ state.m2)
    guard = state.gamma + np.linalg.norm(s.z) * np.linalg.norm(state.m2)
    if abs(denom) < 1e-12 * guard:
        raise DegenerateDenominatorError(
            f"gamma + z'm2 = {denom:.3e} is degenerate at n = {s.n}"
        )
    w_new = k - ((s.z @ k) / denom) * state.m2
    state.w_prev = state.w
    state.w = w_new
    state.last_counts = _step_counts(state, res1, res2)
    state.counts = state.counts + state.last_counts
    return state


def exact_rtls_step_direct(s: Stats, w_prev, gamma: float) -> np.ndarray:
    """w = (Phi + gamma^-1 w_prev z')^-1 (z + gamma^-1 tau w_prev), via a
    dense solve (the inverse is never formed)."""
    w_prev = as_vector(w_prev)
    a = s.phi + np.outer(w_prev, s.z) / gamma
    b = s.z + (s.tau / gamma) * w_prev
    try:
        return np.linalg.solve(a, b)
    except np.linalg.LinAlgError as exc:
        raise SingularMatrixError("RTLS system is singular") from exc


def phi_inv_update(phi_inv: np.ndarray, x, lam: float) -> np.ndarray:
    """Rank-1 update of Phi^-1 matching Phi <- lam*Phi + x x' (in place)."""
    _phi_inv_update(phi_inv, as_vector(x), lam)
    return phi_inv


def exact_rtls_step_sm(phi_inv, z, tau: float, w_prev, gamma: float) -> np.ndarray:
    """The Sherman-Morrison form of the exact RTLS step, evaluated from a
    maintained Phi^-1."""
    phi_inv = as_sym_matrix(phi_inv)
    z = as_vector(z)
    w_prev = as_vector(w_prev)
    m2 = phi_inv @ w_prev
    denom = gamma + z @ m2
    if abs(denom) < 1e-12 * (gamma + np.linalg.norm(z) * np.linalg.norm(m2)):
        raise DegenerateDenominatorError("gamma + z' Phi^-1 w_prev is degenerate")
    b = z + (tau / gamma) * w_prev
    pb = phi_inv @ b
    return pb - m2 * ((z @ pb) / denom)


@dataclass
class RlsState:
    phi_inv: np.ndarray
    z: np.ndarray
    w: np.ndarray
    lam: float


def rls_init(L: int, lam: float, delta: float) -> RlsState:
    return RlsState(phi_inv=np.eye(L) / delta, z=np.zeros(L), w=np.zeros(L), lam=lam)


def rls_step(state: RlsState, x, y: float) -> RlsState:
    """Conventional exponentially weighted RLS (in place)."""
    x = as_vector(x)
    if x.size != state.z.size:
        raise InvalidInputError("regressor length does not match state")
    _phi_inv_update(state.phi_inv, x, state.lam)
    state.z = state.lam * state.z + y * x
    state.w = state.phi_inv @ state.z
    return state


@dataclass
class BcrlsState:
    stats: Stats
    w: np.ndarray


def bcrls_init(L: int, lam: float, delta: float) -> BcrlsState:
    return BcrlsState(stats=stats_mod.init(L, lam, delta), w=np.zeros(L))


def bcrls_step(state: BcrlsState, x, y: float, eta: float) -> np.ndarray:
    """Bias-compensated RLS: w = Phi^-1 [z + (1-lam)^-1 eta w_prev], with a
    dense SPD solve against Phi (requires the input-noise variance eta).

    The compensation gain assumes Phi at its stationary scale, so estimates
    can spike during the initial transient before settling; they recover
    once n is a few multiples of (1-lam)^-1."""
    x = as_vector(x)
    s = state.stats
    stats_mod.update_generic(s, x, y)
    if s.lam == 1.0 and eta != 0.0:
        raise ConfigError("bias compensation is undefined at lam = 1")
    rhs = s.z + (eta / (1.0 - s.lam)) * state.w if eta != 0.0 else s.z
    state.w = solve_spd(s.phi, rhs)
    return state.w


def batch_tls(aug: AugmentedStats) -> np.ndarray:
    """TLS estimate from the minor eigenvector of the augmented weighted
    covariance: w = -gamma^(1/2) q[:L] / q[L]."""
    psi = as_sym_matrix(aug.psi)
    vals, vecs = np.linalg.eigh(psi)
    order = np.argsort(np.abs(vals), kind="stable")
    vals, vecs = vals[order], vecs[:, order]
    scale = max(abs(vals[-1]), 1.0)
    if psi.shape[0] > 1 and abs(abs(vals[0]) - abs(vals[1])) < 1e-10 * scale:
        warnings.warn(
            "two smallest |eigenvalues| nearly coincide; the minor component "
            "is poorly determined",
            IllConditionedMinorComponentWarning,
        )
    q = vecs[:, 0]
    if abs(q[-1]) < 1e-12:
        raise NonGenericTlsError("minor eigenvector has vanishing last entry")
    return -np.sqrt(aug.gamma) * q[:-1] / q[-1]


def inverse_power_reference(aug: AugmentedStats, q_prev) -> np.ndarray:
    """One inverse-power iterate q = Psi^-1 q_prev, normalized to unit norm
    (the normalization is scale-transparent to the extracted weights and
    keeps repeated iterates from overflowing)."""
    q_prev = as_vector(q_prev)
    try:
        q = np.linalg.solve(aug.psi, q_prev)
    except np.linalg.LinAlgError as exc:
        raise SingularMatrixError("psi is singular") from exc
    norm = np.linalg.norm(q)
    if norm == 0.0:
        raise SingularMatrixError("inverse-power iterate vanished")
    return q / norm

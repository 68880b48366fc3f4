"""Numba-compiled inner loops.

The DCD solver and the per-sample trajectory runners live here as plain
array functions so that Monte-Carlo ensembles run at native speed. The
public wrappers in dcd.py and filters.py add validation, dataclasses and
operation counting on top; tests pin the wrappers and these kernels to
each other.
"""

from __future__ import annotations

import numpy as np
from numba import njit

# status codes returned by trajectory runners
OK = 0
DEGENERATE_DENOMINATOR = 1
SINGULAR_SYSTEM = 2


@njit(cache=True)
def dcd_kernel(phi, p, n_max, m_bits, h_range, eps0, alpha0):
    """Leading-element dichotomous coordinate descent for phi @ d = p.

    Walks a binary step-size ladder starting from (eps0, alpha0); a fresh
    call uses eps0 = 1, alpha0 = h_range / 2. Returns
    (d, r, updates, halvings, adds, eps, alpha) where adds tallies the
    comparisons and additions consumed (at most 2*N*L + N + M for a fresh
    ladder) and (eps, alpha) is the final ladder state.
    """
    L = p.shape[0]
    d = np.zeros(L)
    r = p.copy()
    eps = eps0
    alpha = alpha0
    adds = 0
    updates = 0
    halvings = 0
    for _ in range(n_max):
        l = 0
        best = abs(r[0])
        for k in range(1, L):
            ak = abs(r[k])
            if ak > best:
                best = ak
                l = k
        adds += L - 1
        while abs(r[l]) <= 0.5 * alpha * phi[l, l] and eps <= m_bits:
            eps += 1
            alpha *= 0.5
            halvings += 1
            adds += 1
        adds += 1  # the comparison that exits the ladder
        if eps > m_bits:
            break
        sgn = 1.0 if r[l] > 0.0 else -1.0
        d[l] += sgn * alpha
        adds += 1
        step = sgn * alpha
        for k in range(L):
            r[k] -= step * phi[k, l]
        adds += L
        updates += 1
    return d, r, updates, halvings, adds, eps, alpha


@njit(cache=True, inline="always")
def _stats_update_generic(phi, z, x, y, lam):
    L = x.shape[0]
    for i in range(L):
        for j in range(L):
            phi[i, j] = lam * phi[i, j] + x[i] * x[j]
        z[i] = lam * z[i] + y * x[i]


@njit(cache=True, inline="always")
def _stats_update_shift(phi, z, x, y, lam, init_coeff):
    """First-column update plus block copy; init_coeff is delta*lam^n of
    the previous step, whose aging the copy misses on the diagonal."""
    L = x.shape[0]
    first = np.empty(L)
    for j in range(L):
        first[j] = lam * phi[0, j] + x[0] * x[j]
    corr = init_coeff * (1.0 - lam)
    for i in range(L - 1, 0, -1):
        for j in range(L - 1, 0, -1):
            phi[i, j] = phi[i - 1, j - 1]
    for i in range(1, L):
        phi[i, i] -= corr
    for j in range(L):
        phi[0, j] = first[j]
        phi[j, 0] = first[j]
    for i in range(L):
        z[i] = lam * z[i] + y * x[i]


@njit(cache=True)
def dcd_rtls_run(X, y, lam, gamma, delta, n_max, m_bits, h_range, shift):
    """Full DCD-RTLS trajectory over a stream.

    X is (T, L) with row n the regressor at time n+1 (true shifted windows
    when shift is True). Returns (W, status, dcd_adds_total) where W[n] is
    the weight estimate after sample n+1.
    """
    T, L = X.shape
    phi = delta * np.eye(L)
    z = np.zeros(L)
    tau = 0.0
    init_coeff = delta
    m1 = np.zeros(L)
    m2 = np.zeros(L)
    r1 = np.zeros(L)
    r2 = np.zeros(L)
    w = np.zeros(L)       # w_{n-1} on entry to step n
    w_prev = np.zeros(L)  # w_{n-2} on entry to step n
    W = np.empty((T, L))
    dcd_adds = 0
    for t in range(T):
        x = X[t]
        yt = y[t]
        if shift:
            _stats_update_shift(phi, z, x, yt, lam, init_coeff)
        else:
            _stats_update_generic(phi, z, x, yt, lam)
        tau = lam * tau + yt * yt
        init_coeff *= lam
        e1 = yt - np.dot(x, m1)
        xm2 = np.dot(x, m2)
        p1 = np.empty(L)
        p2 = np.empty(L)
        for i in range(L):
            p1[i] = lam * r1[i] + e1 * x[i]
            p2[i] = lam * (r2[i] - w_prev[i]) + w[i] - xm2 * x[i]
        d1, r1, _, _, a1, _, _ = dcd_kernel(phi, p1, n_max, m_bits, h_range, 1, 0.5 * h_range)
        d2, r2, _, _, a2, _, _ = dcd_kernel(phi, p2, n_max, m_bits, h_range, 1, 0.5 * h_range)
        dcd_adds += a1 + a2
        for i in range(L):
            m1[i] += d1[i]
            m2[i] += d2[i]
        k = m1 + (tau / gamma) * m2
        denom = gamma + np.dot(z, m2)
        guard = gamma + np.sqrt(np.dot(z, z) * np.dot(m2, m2))
        if abs(denom) < 1e-12 * guard:
            return W, DEGENERATE_DENOMINATOR, dcd_adds
        w_new = k - (np.dot(z, k) / denom) * m2
        w_prev = w
        w = w_new
        W[t] = w_new
    return W, OK, dcd_adds


@njit(cache=True)
def exact_rtls_run(X, y, lam, gamma, delta):
    """Exact RTLS trajectory: each step solves
    (Phi + gamma^-1 w_prev z') w = z + gamma^-1 tau w_prev directly."""
    T, L = X.shape
    phi = delta * np.eye(L)
    z = np.zeros(L)
    tau = 0.0
    w = np.zeros(L)
    W = np.empty((T, L))
    for t in range(T):
        x = X[t]
        yt = y[t]
        _stats_update_generic(phi, z, x, yt, lam)
        tau = lam * tau + yt * yt
        a = np.empty((L, L))
        for i in range(L):
            for j in range(L):
                a[i, j] = phi[i, j] + w[i] * z[j] / gamma
        b = z + (tau / gamma) * w
        w = np.linalg.solve(a, b.reshape(L, 1))[:, 0]
        W[t] = w
    return W, OK, 0


@njit(cache=True, inline="always")
def _phi_inv_update(phi_inv, x, lam):
    L = x.shape[0]
    px = phi_inv @ x
    denom = lam + np.dot(x, px)
    for i in range(L):
        for j in range(L):
            phi_inv[i, j] = (phi_inv[i, j] - px[i] * px[j] / denom) / lam


@njit(cache=True)
def rls_run(X, y, lam, delta):
    """Conventional exponentially weighted RLS: w = Phi^-1 z."""
    T, L = X.shape
    phi_inv = np.eye(L) / delta
    z = np.zeros(L)
    W = np.empty((T, L))
    for t in range(T):
        x = X[t]
        _phi_inv_update(phi_inv, x, lam)
        for i in range(L):
            z[i] = lam * z[i] + y[t] * x[i]
        W[t] = phi_inv @ z
    return W, OK, 0


@njit(cache=True)
def bcrls_run(X, y, lam, delta, eta):
    """Bias-compensated RLS: w = Phi^-1 z + (1-lam)^-1 eta Phi^-1 w_prev."""
    T, L = X.shape
    phi_inv = np.eye(L) / delta
    z = np.zeros(L)
    w = np.zeros(L)
    c = eta / (1.0 - lam)
    W = np.empty((T, L))
    for t in range(T):
        x = X[t]
        _phi_inv_update(phi_inv, x, lam)
        for i in range(L):
            z[i] = lam * z[i] + y[t] * x[i]
        w = phi_inv @ z + c * (phi_inv @ w)
        W[t] = w
    return W, OK, 0

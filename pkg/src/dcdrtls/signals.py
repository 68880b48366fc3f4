"""Errors-in-variables data generation.

A linear FIR system y = x' h is observed through additive noise on both
sides: x_noisy = x + u with u ~ N(0, eta*I) and y_noisy = y + v with
v ~ N(0, xi). Streams come in two flavors: unstructured (each regressor
drawn i.i.d. from N(0, R)) and shift-structured (a scalar white process
slid through a length-L window), which is what enables the O(L) covariance
update in the filter.

All randomness flows through seeded numpy Generators so every stream is
bit-reproducible from its seed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .errors import ConfigError, InvalidInputError
from .linalg import as_sym_matrix, as_vector, is_spd

#: Reference 8-tap benchmark system used throughout the experiment suite.
_REFERENCE_H = (-0.019, -0.213, -0.600, 0.235, 0.574, 0.377, -0.056, -0.254)


def reference_system() -> np.ndarray:
    """The fixed L = 8 FIR benchmark system."""
    return np.array(_REFERENCE_H, dtype=np.float64)


def random_covariance(L: int, seed: int):
    """Draw a random SPD covariance R = Q diag(f) Q' with controlled spectrum.

    Q is Haar-like orthogonal (QR of a Gaussian matrix with the sign of the
    R-factor diagonal fixed) and the eigenvalues f are uniform on
    [0.2, 1.8]. Returns (R, Q, f).
    """
    if L < 1:
        raise InvalidInputError("L must be >= 1")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((L, L))
    q, r = np.linalg.qr(g)
    q = q * np.sign(np.diag(r))
    f = rng.uniform(0.2, 1.8, size=L)
    cov = (q * f) @ q.T
    cov = 0.5 * (cov + cov.T)
    return cov, q, f


@dataclass
class EivModel:
    """Ground truth for an EIV identification problem.

    h: true system vector (length L)
    R: covariance of the noiseless input regressor (L x L, SPD)
    eta: input-noise variance (per entry)
    xi: output-noise variance
    """

    h: np.ndarray
    R: np.ndarray
    eta: float
    xi: float
    # eigenfactor R = Q diag(f) Q', reused for sampling; derived if not given
    Q: np.ndarray | None = None
    f: np.ndarray | None = None
    _factor: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        self.h = as_vector(self.h)
        self.R = as_sym_matrix(self.R)
        if self.R.shape[0] != self.h.size:
            raise InvalidInputError("R and h dimensions disagree")
        if self.eta < 0 or self.xi < 0:
            raise ConfigError("noise variances must be nonnegative")
        if not is_spd(self.R):
            raise InvalidInputError("R must be positive-definite")
        if self.Q is None or self.f is None:
            vals, vecs = np.linalg.eigh(self.R)
            self.Q, self.f = vecs, vals
        self._factor = self.Q * np.sqrt(self.f)

    @property
    def L(self) -> int:
        return self.h.size

    def gamma(self) -> float:
        """Noise-variance ratio xi / eta (defined only for eta > 0)."""
        if self.eta <= 0:
            raise ConfigError("gamma is undefined for eta = 0")
        return self.xi / self.eta


@dataclass(frozen=True)
class StreamConfig:
    shift_structured: bool
    seed: int
    length: int

    def __post_init__(self):
        if self.length < 1:
            raise ConfigError("length must be >= 1")


@dataclass(frozen=True)
class EivSample:
    x_noisy: np.ndarray
    y_noisy: float
    x_clean: np.ndarray
    y_clean: float
    n: int


def _shift_windows(s: np.ndarray, L: int) -> np.ndarray:
    """Stack a scalar process into shifted windows (newest sample first),
    with zero pre-history: out[n, i] = s[n - i]."""
    T = s.size
    out = np.zeros((T, L))
    for i in range(min(L, T)):
        out[i:, i] = s[: T - i]
    return out


def sample_arrays(model: EivModel, cfg: StreamConfig):
    """Generate a whole stream at once.

    Returns (X_clean, X_noisy, y_clean, y_noisy) with X arrays of shape
    (length, L). Row n is the regressor at time n+1. In shift-structured
    mode the window starts with zero pre-history and R must be diagonal
    (the scalar process is white, so the regressor covariance is
    sigma^2 * I).
    """
    rng = np.random.default_rng(cfg.seed)
    L, T = model.L, cfg.length
    if cfg.shift_structured:
        off = model.R - np.diag(np.diag(model.R))
        diag = np.diag(model.R)
        if np.abs(off).max() > 1e-12 or np.ptp(diag) > 1e-12 * diag.max():
            raise ConfigError(
                "shift-structured streams require R = sigma^2 * I; a white "
                "scalar process cannot realize a general covariance"
            )
        sigma = float(np.sqrt(diag[0]))
        s = sigma * rng.standard_normal(T)
        x_clean = _shift_windows(s, L)
    else:
        g = rng.standard_normal((T, L))
        x_clean = g @ model._factor.T
    if model.eta > 0:
        if cfg.shift_structured:
            # the noise rides on the scalar samples, so the noisy windows
            # stay shift-structured too
            u = _shift_windows(np.sqrt(model.eta) * rng.standard_normal(T), L)
        else:
            u = np.sqrt(model.eta) * rng.standard_normal((T, L))
    else:
        u = np.zeros((T, L))
    v = np.sqrt(model.xi) * rng.standard_normal(T) if model.xi > 0 else np.zeros(T)
    y_clean = x_clean @ model.h
    return x_clean, x_clean + u, y_clean, y_clean + v


def sample_stream(model: EivModel, cfg: StreamConfig) -> Iterator[EivSample]:
    """Yield the stream sample by sample (same draws as sample_arrays)."""
    x_clean, x_noisy, y_clean, y_noisy = sample_arrays(model, cfg)
    for n in range(cfg.length):
        yield EivSample(
            x_noisy=x_noisy[n],
            y_noisy=float(y_noisy[n]),
            x_clean=x_clean[n],
            y_clean=float(y_clean[n]),
            n=n + 1,
        )

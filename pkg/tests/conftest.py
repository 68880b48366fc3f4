import numpy as np
import pytest

from dcdrtls.signals import EivModel, random_covariance, reference_system
from dcdrtls.theory import TheoryModel

L_REF = 8


def orthogonal(L: int, seed: int) -> np.ndarray:
    """A deterministic random orthogonal matrix (QR with sign fix)."""
    rng = np.random.default_rng(seed)
    q, r = np.linalg.qr(rng.standard_normal((L, L)))
    return q * np.sign(np.diag(r))


def spd_from_spectrum(eigs, seed: int) -> np.ndarray:
    """SPD matrix with exactly the given eigenvalues (orthogonal similarity)."""
    eigs = np.asarray(eigs, dtype=np.float64)
    q = orthogonal(eigs.size, seed)
    a = (q * eigs) @ q.T
    return 0.5 * (a + a.T)


@pytest.fixture
def h_ref() -> np.ndarray:
    return reference_system()


@pytest.fixture
def model_ref(h_ref) -> EivModel:
    """The benchmark identification problem: reference system, random
    correlated covariance, moderate noise."""
    cov, q, f = random_covariance(L_REF, seed=2024)
    return EivModel(h=h_ref, R=cov, eta=0.01, xi=0.01, Q=q, f=f)


@pytest.fixture
def stability_cov() -> np.ndarray:
    """Covariance with tr{R^-1} = 12.82, zeta_min = 0.2, zeta_max = 1.8
    exactly: two pinned extreme eigenvalues plus six equal ones chosen so
    the reciprocals sum to 12.82."""
    eigs = np.empty(L_REF)
    eigs[0] = 0.2
    eigs[1] = 1.8
    eigs[2:] = 6.0 / (12.82 - 1.0 / 0.2 - 1.0 / 1.8)
    return spd_from_spectrum(eigs, seed=7)


@pytest.fixture
def theory_ref(model_ref) -> TheoryModel:
    return TheoryModel(
        R=model_ref.R, h=model_ref.h, eta=model_ref.eta, xi=model_ref.xi,
        lam=1.0 - 2.0**-10,
    )

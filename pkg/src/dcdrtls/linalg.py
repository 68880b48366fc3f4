"""Dense linear algebra for small real symmetric systems.

Everything here operates on plain numpy arrays: vectors are 1-D float64
arrays, symmetric matrices are square float64 arrays that are symmetric up
to round-off. Matrices are small (L <= ~64), so we lean on LAPACK through
numpy rather than hand-rolled kernels.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError, SingularMatrixError


def as_vector(x) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1 or x.size < 1:
        raise InvalidInputError(f"expected a 1-D vector, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise InvalidInputError("vector has non-finite entries")
    return x


def as_sym_matrix(a) -> np.ndarray:
    """Validate a dense symmetric matrix (finite, square, symmetric)."""
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise InvalidInputError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InvalidInputError("matrix has non-finite entries")
    scale = np.abs(a).max()
    if scale > 0 and np.abs(a - a.T).max() > 1e-10 * scale:
        raise InvalidInputError("matrix is not symmetric")
    return a


@dataclass(frozen=True)
class EigDecomposition:
    """Full spectrum of a symmetric matrix.

    eigenvalues are sorted ascending by absolute value; eigenvectors[:, i]
    is the unit-norm eigenvector paired with eigenvalues[i].
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def sym_eig(a) -> EigDecomposition:
    """Eigendecomposition of a symmetric matrix, ordered by |eigenvalue|."""
    a = as_sym_matrix(a)
    vals, vecs = np.linalg.eigh(a)
    order = np.argsort(np.abs(vals), kind="stable")
    return EigDecomposition(vals[order], vecs[:, order])


def solve_spd(a, b) -> np.ndarray:
    """Solve A x = b for symmetric positive-definite A via Cholesky.

    A failed Cholesky factorization doubles as the PD detector.
    """
    a = as_sym_matrix(a)
    b = as_vector(b)
    if b.size != a.shape[0]:
        raise InvalidInputError("right-hand side length does not match matrix")
    try:
        c = np.linalg.cholesky(a)
    except np.linalg.LinAlgError as exc:
        raise SingularMatrixError("matrix is not positive-definite") from exc
    y = np.linalg.solve(c, b)
    return np.linalg.solve(c.T, y)


def is_spd(a) -> bool:
    try:
        np.linalg.cholesky(as_sym_matrix(a))
    except np.linalg.LinAlgError:
        return False
    return True


def trace_inverse(a) -> float:
    """tr{A^-1} for positive-definite A, as the sum of eigenvalue reciprocals."""
    dec = sym_eig(a)
    if np.any(dec.eigenvalues <= 0.0):
        raise SingularMatrixError("matrix is not positive-definite")
    return float(np.sum(1.0 / dec.eigenvalues))


def spectral_radius(a) -> float:
    """Largest |eigenvalue| of a symmetric matrix."""
    return float(np.abs(sym_eig(a).eigenvalues[-1]))


def sym_sqrt(a) -> np.ndarray:
    """Symmetric square root of a positive-semidefinite matrix."""
    dec = sym_eig(a)
    if np.any(dec.eigenvalues < -1e-12 * max(abs(dec.eigenvalues[-1]), 1.0)):
        raise SingularMatrixError("matrix has negative eigenvalues")
    vals = np.clip(dec.eigenvalues, 0.0, None)
    v = dec.eigenvectors
    return (v * np.sqrt(vals)) @ v.T

"""Dense complex linear algebra used by the rest of the package.

Matrices are plain ``numpy.ndarray`` objects of dtype complex128; ``as_matrix``
is the single entry point that validates and converts them.
"""
from dataclasses import dataclass

import numpy as np

from .errors import NumericalFailure, PreconditionError

EPS = np.finfo(float).eps


@dataclass(frozen=True, eq=False)
class SingularTriple:
    """One singular value with its unit left/right singular vectors.

    ``M @ right == sigma * left`` for the matrix ``M`` it came from.
    """

    sigma: float
    left: np.ndarray
    right: np.ndarray


def as_matrix(M):
    """Return ``M`` as a finite 2-D complex128 array (a read-only copy)."""
    A = np.array(M, dtype=np.complex128)
    if A.ndim != 2 or A.shape[0] < 1 or A.shape[1] < 1:
        raise PreconditionError(f"expected a non-empty 2-D matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise PreconditionError("matrix has non-finite entries")
    A.setflags(write=False)
    return A


def _decompose(A):
    try:
        return np.linalg.svd(A, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"SVD did not converge: {exc}") from exc


def decompose(M):
    """Thin SVD ``(U, s, Vh)`` with ``s`` nonincreasing.

    This is the one code path behind ``svd``, ``spectral_norm`` and
    ``pseudoinverse``, so their results are bitwise consistent.
    """
    return _decompose(as_matrix(M))


def svd(M):
    """All singular triples of ``M``, sorted by nonincreasing sigma."""
    U, s, Vh = decompose(M)
    return [SingularTriple(float(s[i]), U[:, i], Vh[i].conj()) for i in range(s.size)]


def singular_values(M):
    return decompose(M)[1]


def spectral_norm(M):
    return float(decompose(M)[1][0])


def pseudoinverse(M, rank_tol=None):
    """Moore-Penrose pseudoinverse by SVD truncation.

    Singular values ``<= rank_tol * s_max`` are dropped; the default
    ``rank_tol`` is ``max(rows, cols) * eps``.
    """
    A = as_matrix(M)
    if rank_tol is None:
        rank_tol = max(A.shape) * EPS
    if rank_tol < 0:
        raise PreconditionError("rank_tol must be nonnegative")
    U, s, Vh = _decompose(A)
    keep = s > rank_tol * s[0]
    return (Vh[keep].conj().T / s[keep]) @ U[:, keep].conj().T


def eigenvalues(M):
    """Eigenvalues of a square matrix, with multiplicity, in LAPACK order."""
    A = as_matrix(M)
    if A.shape[0] != A.shape[1]:
        raise PreconditionError(f"eigenvalues need a square matrix, got {A.shape}")
    try:
        return np.linalg.eigvals(A)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"eigenvalue iteration did not converge: {exc}") from exc

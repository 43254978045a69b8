"""Dense complex linear-algebra kernels used by the rest of the package.

All floating-point matrix work (SVD, eigendecomposition, least squares)
is funnelled through the three functions here so their tolerance
contracts live in one place.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np


class SvdFactors(NamedTuple):
    U: np.ndarray       # (rows, k) left singular vectors, orthonormal columns
    sigma: np.ndarray   # (k,) nonincreasing, nonnegative
    V: np.ndarray       # (cols, k) right singular vectors, orthonormal columns


def as_matrix(A) -> np.ndarray:
    """Validate and coerce input to a 2-D complex array with finite entries."""
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got ndim={A.ndim}")
    if A.shape[0] < 1 or A.shape[1] < 1:
        raise ValueError(f"matrix must be at least 1x1, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix contains non-finite entries")
    return A


def thin_svd(A, k: int) -> SvdFactors:
    """Leading-k singular factors of A.

    Reconstruction U @ diag(sigma) @ V^H differs from A by at most
    sigma_{k+1} in spectral norm.
    """
    A = as_matrix(A)
    if not 1 <= k <= min(A.shape):
        raise ValueError(f"k={k} out of range for shape {A.shape}")
    U, s, Vh = np.linalg.svd(A, full_matrices=False)
    return SvdFactors(U[:, :k], s[:k], Vh[:k].conj().T)


def eig_dense(A) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues and unit-normalized eigenvector columns of a square matrix."""
    A = as_matrix(A)
    if A.shape[0] != A.shape[1]:
        raise ValueError(f"eig_dense requires a square matrix, got {A.shape}")
    lam, W = np.linalg.eig(A)
    W = W / np.linalg.norm(W, axis=0, keepdims=True)
    return lam, W


def lstsq_pinv(A, B, rcond: float = 1e-12) -> np.ndarray:
    """Minimum-norm least-squares solution X of A @ X = B.

    Singular values below rcond * sigma_max are treated as zero.
    """
    A = as_matrix(A)
    B = as_matrix(B)
    if A.shape[0] != B.shape[0]:
        raise ValueError(f"row mismatch: A has {A.shape[0]}, B has {B.shape[0]}")
    if rcond < 0:
        raise ValueError("rcond must be nonnegative")
    X, *_ = np.linalg.lstsq(A, B, rcond=rcond if rcond > 0 else None)
    return X


def pinv(A, rcond: float = 1e-12) -> np.ndarray:
    """Moore-Penrose pseudo-inverse with the same rcond convention."""
    A = as_matrix(A)
    return np.linalg.pinv(A, rcond=rcond)

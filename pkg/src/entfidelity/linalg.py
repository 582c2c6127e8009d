"""Small dense complex-matrix helpers.

Matrices are plain 2-D ``numpy`` arrays of dtype ``complex128``. Everything
here is sized for the 2x2 and 4x4 work the rest of the package needs; there
is no attempt at general-purpose linear algebra.
"""

from __future__ import annotations

import numpy as np

HERMITIAN_TOL = 1e-10
PSD_TOL = 1e-10

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)


class LinalgError(ValueError):
    """Raised on malformed matrix input (shape, finiteness, symmetry)."""


def as_matrix(m) -> np.ndarray:
    """Coerce ``m`` to a finite 2-D complex array.

    A 1-D input is treated as a column vector.
    """
    arr = np.asarray(m, dtype=complex)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2 or arr.size == 0:
        raise LinalgError(f"expected a non-empty 2-D matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise LinalgError("matrix has non-finite entries")
    return arr


def _square(m: np.ndarray, what: str = "matrix") -> np.ndarray:
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise LinalgError(f"{what} must be square, got shape {m.shape}")
    return m


def matmul(a, b) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise LinalgError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def adjoint(m) -> np.ndarray:
    """Conjugate transpose."""
    return as_matrix(m).conj().T


def trace(m) -> complex:
    return complex(np.trace(_square(m)))


def kron(a, b) -> np.ndarray:
    """Kronecker product; entry ``(i*rb + k, j*cb + l)`` is ``a[i, j] * b[k, l]``."""
    return np.kron(as_matrix(a), as_matrix(b))


def hermitian_deviation(m) -> float:
    """Largest entry of ``|m - m^dagger|``."""
    m = _square(m)
    return float(np.max(np.abs(m - m.conj().T)))


def is_hermitian(m, tol: float = HERMITIAN_TOL) -> bool:
    return hermitian_deviation(m) <= tol


def _require_hermitian(m, tol: float) -> np.ndarray:
    m = _square(m)
    dev = hermitian_deviation(m)
    if dev > tol:
        raise LinalgError(f"matrix is not Hermitian (max |m - m^dagger| = {dev:.3e})")
    return m


def hermitian_eigendecomposition(m, tol: float = HERMITIAN_TOL):
    """Eigenvalues (descending) and orthonormal eigenvectors of a Hermitian matrix.

    Returns
    -------
    eigenvalues : ndarray of float, shape (d,)
    eigenvectors : ndarray of complex, shape (d, d)
        Column ``k`` is the eigenvector for ``eigenvalues[k]``.
    """
    m = _require_hermitian(m, tol)
    # symmetrise so eigh sees an exactly Hermitian input
    vals, vecs = np.linalg.eigh(0.5 * (m + m.conj().T))
    order = np.argsort(vals, kind="stable")[::-1]
    return vals[order], vecs[:, order]


def min_eigenvalue(m, tol: float = HERMITIAN_TOL) -> float:
    vals, _ = hermitian_eigendecomposition(m, tol)
    return float(vals[-1])


def is_positive_semidefinite(m, tol: float = PSD_TOL) -> bool:
    """True iff ``m`` is Hermitian within ``tol`` and its smallest eigenvalue is >= -tol."""
    return min_eigenvalue(m, tol) >= -tol


def ket(index: int, dim: int) -> np.ndarray:
    """Computational basis column vector ``|index>`` in dimension ``dim``."""
    v = np.zeros((dim, 1), dtype=complex)
    v[index, 0] = 1.0
    return v


def projector(v) -> np.ndarray:
    v = as_matrix(v)
    return v @ v.conj().T

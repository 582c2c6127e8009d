"""Density operators, the (a, c) qubit parametrization, and purifications.

Bipartite vectors and operators are always ordered reference (x) system.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import linalg
from .linalg import HERMITIAN_TOL, LinalgError

STATE_TOL = 1e-10
COHERENCE_TOL = 1e-12


class StateError(ValueError):
    """Raised when inputs do not describe a valid quantum state."""


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=complex)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """A Hermitian, unit-trace, positive semidefinite ``d x d`` matrix."""

    matrix: np.ndarray

    def __post_init__(self):
        try:
            m = linalg.as_matrix(self.matrix)
        except LinalgError as exc:
            raise StateError(str(exc)) from None
        if m.shape[0] != m.shape[1]:
            raise StateError(f"density operator must be square, got {m.shape}")
        dev = linalg.hermitian_deviation(m)
        if dev > HERMITIAN_TOL:
            raise StateError(f"not Hermitian: max |rho - rho^dagger| = {dev:.3e}")
        tr = linalg.trace(m)
        if abs(tr - 1.0) > STATE_TOL:
            raise StateError(f"trace must be 1, got {tr.real:.12g}")
        lam = linalg.min_eigenvalue(m)
        if lam < -STATE_TOL:
            raise StateError(f"not positive semidefinite: min eigenvalue {lam:.3e}")
        object.__setattr__(self, "matrix", _frozen(m))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class QubitStateParams:
    """``rho = [[a, c], [conj(c), 1 - a]]`` with ``|c|^2 <= a (1 - a)``."""

    a: float
    c: complex = 0j

    def __post_init__(self):
        a = float(self.a)
        c = complex(self.c)
        if not (math.isfinite(a) and math.isfinite(c.real) and math.isfinite(c.imag)):
            raise StateError("a and c must be finite")
        if not 0.0 <= a <= 1.0:
            raise StateError(f"a must lie in [0, 1], got {a}")
        if abs(c) ** 2 > a * (1.0 - a) + COHERENCE_TOL:
            raise StateError(
                f"|c|^2 <= a*b violated: |c|^2 = {abs(c) ** 2:.12g} > a*b = {a * (1 - a):.12g}"
            )
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "c", c)

    @property
    def b(self) -> float:
        return 1.0 - self.a

    def matrix(self) -> np.ndarray:
        c = self.c
        return np.array([[self.a, c], [c.conjugate(), self.b]], dtype=complex)


def qubit_state(params: QubitStateParams) -> DensityOperator:
    return DensityOperator(params.matrix())


def maximally_mixed(dim: int = 2) -> DensityOperator:
    return DensityOperator(np.eye(dim, dtype=complex) / dim)


@dataclass(frozen=True, eq=False)
class Purification:
    """Unit vector on reference (x) system, stored as a ``d^2 x 1`` column."""

    vector: np.ndarray
    reference_dim: int

    def __post_init__(self):
        v = linalg.as_matrix(self.vector)
        d = int(self.reference_dim)
        if v.shape != (d * d, 1):
            raise StateError(f"purification of a {d}-level state must have shape ({d * d}, 1)")
        norm = float(np.linalg.norm(v))
        if abs(norm - 1.0) > STATE_TOL:
            raise StateError(f"purification must have unit norm, got {norm:.12g}")
        object.__setattr__(self, "vector", _frozen(v))
        object.__setattr__(self, "reference_dim", d)

    def reduced_state(self) -> np.ndarray:
        return partial_trace_reference(linalg.projector(self.vector), self.reference_dim)

    def with_reference_unitary(self, w) -> "Purification":
        """Apply ``w (x) I`` to the vector; the result purifies the same state."""
        d = self.reference_dim
        return Purification(linalg.kron(w, np.eye(d)) @ self.vector, d)


def purify(rho: DensityOperator) -> Purification:
    """``sum_i sqrt(lambda_i) |i>_R (x) |e_i>`` over the eigenpairs of ``rho``.

    Reference basis index ``i`` follows descending eigenvalue order.
    """
    d = rho.dim
    vals, vecs = linalg.hermitian_eigendecomposition(rho.matrix)
    vals = np.where((vals < 0) & (vals >= -STATE_TOL), 0.0, vals)
    psi = np.zeros((d * d, 1), dtype=complex)
    for i in range(d):
        psi += math.sqrt(vals[i]) * linalg.kron(linalg.ket(i, d), vecs[:, [i]])
    # eigenvalues sum to 1 only up to rounding
    psi /= np.linalg.norm(psi)
    return Purification(psi, d)


def partial_trace_reference(m, d: int) -> np.ndarray:
    """Trace out the first (reference) factor of a ``d^2 x d^2`` operator."""
    m = linalg.as_matrix(m)
    if d < 1 or m.shape != (d * d, d * d):
        raise StateError(f"expected a {d * d}x{d * d} matrix for d={d}, got {m.shape}")
    return np.einsum("rirj->ij", m.reshape(d, d, d, d))

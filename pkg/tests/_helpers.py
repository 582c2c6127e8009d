"""Random test objects shared across the suite."""

import numpy as np

from entfidelity.state import QubitStateParams


def random_qubit_params(rng, boundary=False):
    a = rng.uniform(0, 1)
    r = np.sqrt(a * (1 - a))
    if not boundary:
        r *= rng.uniform(0, 1)
    c = r * np.exp(1j * rng.uniform(0, 2 * np.pi))
    # keep |c|^2 <= a(1-a) after rounding
    return QubitStateParams(a, c * (1 - 1e-15))


def random_density(rng, d):
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    m = g @ g.conj().T
    return m / np.trace(m).real


def random_hermitian(rng, d):
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return g + g.conj().T


def random_unitary(rng, d):
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    q, r = np.linalg.qr(g)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_isometry(rng, rows, cols):
    """``rows x cols`` matrix with orthonormal columns."""
    return random_unitary(rng, rows)[:, :cols]


def random_weyl_probs(rng):
    return tuple(rng.dirichlet(np.ones(4)))

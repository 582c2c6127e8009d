"""The two-letter parametric source and optimization over the letter weight ``p``.

The source emits ``|psi+> = sqrt(p)|0> + sqrt(1-p)|1>`` with probability ``q``
and ``|psi-> = sqrt(p)|0> - sqrt(1-p)|1>`` otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable

import numpy as np

from .channels import ChannelSpec, Family
from .fidelity import FidelityError, FidelityResult, Method
from .state import QubitStateParams, StateError

REGIME_TOL = 1e-15
GOLDEN_TOL = 1e-9
_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class TwoLetterSource:
    p: float
    q: float

    def __post_init__(self):
        for name in ("p", "q"):
            v = float(getattr(self, name))
            if not (math.isfinite(v) and 0.0 <= v <= 1.0):
                raise StateError(f"{name} must lie in [0, 1], got {v}")
            object.__setattr__(self, name, v)

    @property
    def k(self) -> float:
        """Source bias ``(2q - 1)^2``."""
        return (2.0 * self.q - 1.0) ** 2

    def letters(self) -> tuple[np.ndarray, np.ndarray]:
        s0, s1 = math.sqrt(self.p), math.sqrt(1.0 - self.p)
        return (
            np.array([[s0], [s1]], dtype=complex),
            np.array([[s0], [-s1]], dtype=complex),
        )

    def mixture(self) -> np.ndarray:
        """``q |psi+><psi+| + (1-q) |psi-><psi-|`` built from the letters directly."""
        plus, minus = self.letters()
        return self.q * (plus @ plus.conj().T) + (1.0 - self.q) * (minus @ minus.conj().T)


class Regime(str, Enum):
    SINGLE_LETTER_P = "SingleLetterP"
    SINGLE_LETTER_Q = "SingleLetterQ"
    ORTHOGONAL = "Orthogonal"
    GENERIC = "Generic"


def classify_regime(src: TwoLetterSource, tol: float = REGIME_TOL) -> Regime:
    def near(x, target):
        return abs(x - target) <= tol

    if near(src.p, 0.0) or near(src.p, 1.0):
        return Regime.SINGLE_LETTER_P
    if near(src.q, 0.0) or near(src.q, 1.0):
        return Regime.SINGLE_LETTER_Q
    if near(src.p, 0.5):
        return Regime.ORTHOGONAL
    return Regime.GENERIC


def source_state(src: TwoLetterSource) -> QubitStateParams:
    c = (2.0 * src.q - 1.0) * math.sqrt(src.p * (1.0 - src.p))
    return QubitStateParams(a=src.p, c=complex(c, 0.0))


def fe_two_letter(src: TwoLetterSource, spec: ChannelSpec) -> FidelityResult:
    """Entanglement fidelity of the source state, written directly in ``(p, q)``."""
    p, k = src.p, src.k
    pq = p * (1.0 - p)
    fam = spec.family
    if fam is Family.IDENTITY:
        value = 1.0
    elif fam is Family.PAULI_X:
        value = 1.0 + spec.u * (4.0 * k * pq - 1.0)
    elif fam is Family.DEPHASING:
        value = 1.0 + 4.0 * spec.u * p * (p - 1.0)
    elif fam is Family.DEPOLARIZING:
        value = 1.0 + spec.u * (k * pq + (2.0 * p - 1.0) ** 2 / 4.0 - 0.75)
    elif fam is Family.WEYL:
        p00, p10, p01, _ = spec.weyl_probabilities()
        value = p00 + 4.0 * p10 * k * pq + p01 * (2.0 * p - 1.0) ** 2
    elif fam is Family.AMPLITUDE_DAMPING:
        g = spec.gamma
        value = p**2 + (1.0 - g) * (1.0 - p) ** 2 + pq * (2.0 * math.sqrt(1.0 - g) + g * k)
    elif fam is Family.WERNER_HOLEVO:
        value = 0.0
    else:
        raise FidelityError(f"no two-letter closed form for {fam}")
    return FidelityResult(value, Method.CLOSED_FORM)


class Objective(str, Enum):
    MAX = "max"
    MIN = "min"


@dataclass(frozen=True)
class Optimum:
    p_star: float
    value: float


def golden_section(f: Callable[[float], float], lo: float, hi: float, tol: float = GOLDEN_TOL):
    """Minimize a unimodal ``f`` on ``[lo, hi]``; returns ``(x, f(x))``."""
    a, b = lo, hi
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    return x, f(x)


def argopt_p(
    spec: ChannelSpec, q: float, objective: Objective | str = Objective.MAX, grid_n: int = 201
) -> Optimum:
    """Best letter weight ``p`` for fixed ``q`` and channel.

    A uniform grid of ``grid_n`` points locates the best bracket, which golden
    section then refines to ``1e-9`` in ``p``. The refined point replaces the
    grid point only if it is strictly better, so ties resolve toward the
    smallest grid ``p``.
    """
    if grid_n < 3:
        raise ValueError("grid_n must be at least 3")
    objective = Objective(objective)
    sign = -1.0 if objective is Objective.MAX else 1.0

    def cost(p: float) -> float:
        return sign * fe_two_letter(TwoLetterSource(p, q), spec).value

    grid = np.linspace(0.0, 1.0, grid_n)
    costs = [cost(float(p)) for p in grid]
    best = int(np.argmin(costs))  # first minimum, i.e. smallest p on ties
    lo = float(grid[max(best - 1, 0)])
    hi = float(grid[min(best + 1, grid_n - 1)])
    x, fx = golden_section(cost, lo, hi)
    if fx < costs[best]:
        p_star, c_star = x, fx
    else:
        p_star, c_star = float(grid[best]), costs[best]
    return Optimum(p_star, sign * c_star)

"""Entanglement fidelity by three independent routes.

* :func:`fe_kraus` sums ``|Tr(rho A_i)|^2`` over a Kraus family and works in
  any dimension.
* :func:`fe_closed_form` evaluates the tabulated single-qubit expressions in
  terms of ``(a, b, c)``.
* :func:`fe_oracle` goes back to the definition: purify ``rho``, push the
  system half through the channel and take the overlap with the purification.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from . import linalg
from .channels import ChannelError, ChannelSpec, Family, KrausChannel, build
from .state import DensityOperator, Purification, QubitStateParams, purify, qubit_state

RANGE_TOL = 1e-10
IMAG_TOL = 1e-8


class FidelityError(ValueError):
    pass


class Method(str, Enum):
    KRAUS_SUM = "KrausSum"
    CLOSED_FORM = "ClosedForm"
    PURIFICATION_ORACLE = "PurificationOracle"


@dataclass(frozen=True)
class FidelityResult:
    value: float
    method: Method

    def __post_init__(self):
        v = float(self.value)
        if not (-RANGE_TOL <= v <= 1.0 + RANGE_TOL):
            raise FidelityError(f"fidelity {v!r} outside [0, 1] ({self.method.value})")
        object.__setattr__(self, "value", v)

    def __float__(self) -> float:
        return self.value


def _check_dims(rho: DensityOperator, ch: KrausChannel) -> None:
    if rho.dim != ch.dim:
        raise ChannelError(f"channel dimension {ch.dim} does not match state dimension {rho.dim}")


def fe_kraus(rho: DensityOperator, ch: KrausChannel) -> FidelityResult:
    _check_dims(rho, ch)
    total = sum(abs(linalg.trace(rho.matrix @ a)) ** 2 for a in ch.kraus_ops)
    return FidelityResult(total, Method.KRAUS_SUM)


def fe_oracle(
    rho: DensityOperator, ch: KrausChannel, purification: Optional[Purification] = None
) -> FidelityResult:
    """``<Psi| (I_R (x) N)(|Psi><Psi|) |Psi>`` for a purification ``|Psi>`` of ``rho``.

    ``purification`` defaults to :func:`~entfidelity.state.purify`; any other
    purification of the same state may be supplied.
    """
    _check_dims(rho, ch)
    d = rho.dim
    if purification is None:
        purification = purify(rho)
    elif purification.reference_dim != d:
        raise FidelityError("purification does not match the state dimension")
    psi = purification.vector
    ref_id = np.eye(d, dtype=complex)
    joint = np.zeros((d * d, d * d), dtype=complex)
    for a in ch.kraus_ops:
        branch = np.kron(ref_id, a) @ psi
        joint += branch @ branch.conj().T
    overlap = complex((psi.conj().T @ joint @ psi)[0, 0])
    if abs(overlap.imag) > IMAG_TOL:
        raise FidelityError(f"oracle overlap has imaginary part {overlap.imag:.3e}")
    return FidelityResult(overlap.real, Method.PURIFICATION_ORACLE)


def fe_closed_form(params: QubitStateParams, spec: ChannelSpec) -> FidelityResult:
    a, b, c = params.a, params.b, params.c
    re, im = c.real, c.imag
    fam = spec.family
    if fam is Family.IDENTITY:
        value = 1.0
    elif fam is Family.PAULI_X:
        value = 1.0 + spec.u * (4.0 * re**2 - 1.0)
    elif fam is Family.DEPHASING:
        value = 1.0 + spec.u * ((a - b) ** 2 - 1.0)
    elif fam is Family.DEPOLARIZING:
        value = 1.0 + spec.u * (abs(c) ** 2 + (a - b) ** 2 / 4.0 - 0.75)
    elif fam is Family.WEYL:
        p00, p10, p01, p11 = spec.weyl_probabilities()
        value = p00 + 4.0 * p10 * re**2 + p01 * (a - b) ** 2 + 4.0 * p11 * im**2
    elif fam is Family.AMPLITUDE_DAMPING:
        g = spec.gamma
        value = g * abs(c) ** 2 + (a + b * math.sqrt(1.0 - g)) ** 2
    elif fam is Family.WERNER_HOLEVO:
        value = 4.0 * im**2
    else:
        raise FidelityError(f"no closed form for {fam}")
    return FidelityResult(value, Method.CLOSED_FORM)


@dataclass(frozen=True)
class CrossCheck:
    closed: float
    kraus: float
    oracle: float

    @property
    def max_spread(self) -> float:
        vals = (self.closed, self.kraus, self.oracle)
        return max(vals) - min(vals)


def cross_check(params: QubitStateParams, spec: ChannelSpec) -> CrossCheck:
    rho = qubit_state(params)
    ch = build(spec)
    return CrossCheck(
        closed=fe_closed_form(params, spec).value,
        kraus=fe_kraus(rho, ch).value,
        oracle=fe_oracle(rho, ch).value,
    )

"""Kraus channels, CPTP checks, and the standard single-qubit noise families."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional

import numpy as np

from . import linalg
from .linalg import I2, X, Y, Z
from .state import DensityOperator

CPTP_TOL = 1e-10
WEYL_SUM_TOL = 1e-12


class ChannelError(ValueError):
    """Raised on invalid channel parameters or mismatched dimensions."""


class Family(str, Enum):
    PAULI_X = "PauliX"
    DEPHASING = "Dephasing"
    DEPOLARIZING = "Depolarizing"
    WERNER_HOLEVO = "WernerHolevoQubit"
    WEYL = "Weyl"
    AMPLITUDE_DAMPING = "AmplitudeDamping"
    IDENTITY = "Identity"

    @property
    def parameter(self) -> Optional[str]:
        """Name of the scalar parameter the family takes, if any."""
        if self in (Family.PAULI_X, Family.DEPHASING, Family.DEPOLARIZING):
            return "u"
        if self is Family.AMPLITUDE_DAMPING:
            return "gamma"
        if self is Family.WEYL:
            return "P"
        return None

    @classmethod
    def parse(cls, name: str) -> "Family":
        key = "".join(ch for ch in str(name).lower() if ch.isalnum())
        try:
            return _FAMILY_ALIASES[key]
        except KeyError:
            known = ", ".join(sorted(_FAMILY_ALIASES))
            raise ChannelError(f"unknown channel family {name!r} (known: {known})") from None


_FAMILY_ALIASES = {
    "paulix": Family.PAULI_X,
    "bitflip": Family.PAULI_X,
    "dephasing": Family.DEPHASING,
    "phaseflip": Family.DEPHASING,
    "depolarizing": Family.DEPOLARIZING,
    "wernerholevo": Family.WERNER_HOLEVO,
    "wernerholevoqubit": Family.WERNER_HOLEVO,
    "weyl": Family.WEYL,
    "generalizedpauli": Family.WEYL,
    "amplitudedamping": Family.AMPLITUDE_DAMPING,
    "identity": Family.IDENTITY,
}


def _unit_interval(name: str, value) -> float:
    if value is None:
        raise ChannelError(f"missing parameter {name}")
    value = float(value)
    if not (math.isfinite(value) and 0.0 <= value <= 1.0):
        raise ChannelError(f"{name} must lie in [0, 1], got {value}")
    return value


@dataclass(frozen=True)
class ChannelSpec:
    """A named channel family together with its parameters.

    ``P`` is the Weyl probability matrix ``((p00, p01), (p10, p11))``; the row
    index is the power of X and the column index the power of Z.
    """

    family: Family
    u: Optional[float] = None
    gamma: Optional[float] = None
    P: Optional[tuple] = None

    def __post_init__(self):
        family = Family.parse(self.family) if not isinstance(self.family, Family) else self.family
        object.__setattr__(self, "family", family)
        wanted = family.parameter
        given = {k for k in ("u", "gamma", "P") if getattr(self, k) is not None}
        extra = given - {wanted}
        if extra:
            raise ChannelError(
                f"{family.value} does not take parameter(s) {', '.join(sorted(extra))}"
            )
        if wanted == "u":
            object.__setattr__(self, "u", _unit_interval("u", self.u))
        elif wanted == "gamma":
            object.__setattr__(self, "gamma", _unit_interval("gamma", self.gamma))
        elif wanted == "P":
            object.__setattr__(self, "P", _weyl_matrix(self.P))

    @classmethod
    def pauli_x(cls, u: float) -> "ChannelSpec":
        return cls(Family.PAULI_X, u=u)

    @classmethod
    def dephasing(cls, u: float) -> "ChannelSpec":
        return cls(Family.DEPHASING, u=u)

    @classmethod
    def depolarizing(cls, u: float) -> "ChannelSpec":
        return cls(Family.DEPOLARIZING, u=u)

    @classmethod
    def werner_holevo(cls) -> "ChannelSpec":
        return cls(Family.WERNER_HOLEVO)

    @classmethod
    def weyl(cls, p00: float, p10: float, p01: float, p11: float) -> "ChannelSpec":
        return cls(Family.WEYL, P=((p00, p01), (p10, p11)))

    @classmethod
    def amplitude_damping(cls, gamma: float) -> "ChannelSpec":
        return cls(Family.AMPLITUDE_DAMPING, gamma=gamma)

    @classmethod
    def identity(cls) -> "ChannelSpec":
        return cls(Family.IDENTITY)

    def weyl_probabilities(self) -> tuple[float, float, float, float]:
        """``(p00, p10, p01, p11)``: weights of I, X, Z and XZ."""
        if self.P is None:
            raise ChannelError(f"{self.family.value} has no probability matrix")
        (p00, p01), (p10, p11) = self.P
        return p00, p10, p01, p11

    def to_dict(self) -> dict:
        out = {"family": self.family.value}
        if self.u is not None:
            out["u"] = self.u
        if self.gamma is not None:
            out["gamma"] = self.gamma
        if self.P is not None:
            out["P"] = [list(row) for row in self.P]
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "ChannelSpec":
        if not isinstance(data, dict) or "family" not in data:
            raise ChannelError('channel spec must be a JSON object with a "family" key')
        unknown = set(data) - {"family", "u", "gamma", "P"}
        if unknown:
            raise ChannelError(f"unknown channel spec keys: {', '.join(sorted(unknown))}")
        return cls(data["family"], u=data.get("u"), gamma=data.get("gamma"), P=data.get("P"))

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "ChannelSpec":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ChannelError(f"malformed channel spec JSON: {exc}") from None
        return cls.from_dict(data)


def _weyl_matrix(P) -> tuple:
    try:
        arr = np.asarray(P, dtype=float)
    except (TypeError, ValueError):
        raise ChannelError("Weyl P must be a 2x2 matrix of numbers") from None
    if arr.shape != (2, 2):
        raise ChannelError(f"Weyl P must be 2x2, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)) or np.any(arr < 0):
        raise ChannelError("Weyl P entries must be finite and nonnegative")
    total = float(arr.sum())
    if abs(total - 1.0) > WEYL_SUM_TOL:
        raise ChannelError(f"Weyl P entries must sum to 1, got {total:.12g}")
    return tuple(tuple(float(x) for x in row) for row in arr)


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """``rho -> sum_i K_i rho K_i^dagger``.

    Construction only checks shapes; use :func:`validate` for CPTP.
    """

    kraus_ops: tuple

    def __post_init__(self):
        ops = tuple(linalg.as_matrix(k).copy() for k in self.kraus_ops)
        if not ops:
            raise ChannelError("a Kraus channel needs at least one operator")
        d = ops[0].shape[0]
        for k in ops:
            if k.shape != (d, d):
                raise ChannelError(f"Kraus operators must all be {d}x{d}, got {k.shape}")
            k.setflags(write=False)
        object.__setattr__(self, "kraus_ops", ops)

    @property
    def dim(self) -> int:
        return self.kraus_ops[0].shape[0]

    def __len__(self) -> int:
        return len(self.kraus_ops)


def _scaled(weights_ops) -> KrausChannel:
    # zero-weight terms are dropped; they contribute nothing to the map
    ops = [math.sqrt(w) * op for w, op in weights_ops if w > 0.0]
    if not ops:
        raise ChannelError("all Kraus weights are zero")
    return KrausChannel(tuple(ops))


def build(spec: ChannelSpec) -> KrausChannel:
    """Kraus family for ``spec`` exactly as tabulated for each channel."""
    fam = spec.family
    if fam is Family.IDENTITY:
        return KrausChannel((I2,))
    if fam is Family.PAULI_X:
        return _scaled([(1.0 - spec.u, I2), (spec.u, X)])
    if fam is Family.DEPHASING:
        return _scaled([(1.0 - spec.u, I2), (spec.u, Z)])
    if fam is Family.DEPOLARIZING:
        u = spec.u
        return _scaled([(1.0 - 0.75 * u, I2), (u / 4, X), (u / 4, Y), (u / 4, Z)])
    if fam is Family.WERNER_HOLEVO:
        return KrausChannel((Y,))
    if fam is Family.WEYL:
        p00, p10, p01, p11 = spec.weyl_probabilities()
        return _scaled([(p00, I2), (p10, X), (p01, Z), (p11, X @ Z)])
    if fam is Family.AMPLITUDE_DAMPING:
        g = spec.gamma
        a0 = np.array([[0, math.sqrt(g)], [0, 0]], dtype=complex)
        a1 = np.array([[1, 0], [0, math.sqrt(1.0 - g)]], dtype=complex)
        return KrausChannel((a0, a1) if g > 0.0 else (a1,))
    raise ChannelError(f"no Kraus construction for {fam}")


def apply_matrix(ch: KrausChannel, m) -> np.ndarray:
    """Apply the channel to an arbitrary ``d x d`` operator."""
    m = linalg.as_matrix(m)
    if m.shape != (ch.dim, ch.dim):
        raise ChannelError(f"channel acts on {ch.dim}x{ch.dim} operators, got {m.shape}")
    return sum(k @ m @ k.conj().T for k in ch.kraus_ops)


def apply(ch: KrausChannel, rho: DensityOperator) -> DensityOperator:
    if rho.dim != ch.dim:
        raise ChannelError(f"channel dimension {ch.dim} does not match state dimension {rho.dim}")
    return DensityOperator(apply_matrix(ch, rho.matrix))


def choi_of_map(fn: Callable[[np.ndarray], np.ndarray], dim: int) -> np.ndarray:
    """``sum_ij |i><j| (x) fn(|i><j|)`` for any linear map ``fn`` on ``dim x dim`` matrices."""
    out = np.zeros((dim * dim, dim * dim), dtype=complex)
    for i in range(dim):
        for j in range(dim):
            eij = np.zeros((dim, dim), dtype=complex)
            eij[i, j] = 1.0
            out += np.kron(eij, fn(eij))
    return out


def choi_matrix(ch: KrausChannel) -> np.ndarray:
    """Unnormalized Choi matrix (trace ``d`` for trace-preserving channels)."""
    return choi_of_map(lambda m: apply_matrix(ch, m), ch.dim)


@dataclass(frozen=True)
class ValidationReport:
    tp_residual: float
    min_choi_eigenvalue: float
    ok: bool


def completeness_residual(ch: KrausChannel) -> float:
    """Largest entry of ``|sum K^dagger K - I|``."""
    total = sum(k.conj().T @ k for k in ch.kraus_ops)
    return float(np.max(np.abs(total - np.eye(ch.dim))))


def validate(ch: KrausChannel, tol: float = CPTP_TOL) -> ValidationReport:
    tp = completeness_residual(ch)
    lam = linalg.min_eigenvalue(choi_matrix(ch))
    return ValidationReport(tp, lam, tp <= tol and lam >= -tol)


def remix(ch: KrausChannel, v) -> KrausChannel:
    """Kraus family ``A'_i = sum_j v[i, j] A_j``; same channel when ``v`` is an isometry."""
    v = linalg.as_matrix(v)
    if v.shape[1] != len(ch):
        raise ChannelError(f"mixing matrix needs {len(ch)} columns, got {v.shape[1]}")
    ops = np.tensordot(v, np.stack(ch.kraus_ops), axes=(1, 0))
    return KrausChannel(tuple(ops))

"""Ranking the Pauli-X (``X``), dephasing (``Z``) and depolarizing (``D``) channels.

For a two-letter source all three fidelities have the form ``1 + u*g(p, q)``,
so their order depends only on ``p`` and ``k = (2q - 1)^2``. The crossover
points sit symmetrically about ``p = 1/2`` at offsets ``b/2`` where ``b`` is
one of three radicals in ``k``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .channels import ChannelSpec
from .source import TwoLetterSource, fe_two_letter

LABELS = ("X", "Z", "D")
TIE_TOL = 1e-12
BREAKPOINT_TOL = 1e-9
SAMPLE_MARGIN = 1e-9
# q-interval on which F_D >= F_X holds for every p
CENTRAL_Q = (0.5 - 1.0 / (2.0 * math.sqrt(3.0)), 0.5 + 1.0 / (2.0 * math.sqrt(3.0)))
_K_EPS = 1e-15


def bias(q: float) -> float:
    return (2.0 * q - 1.0) ** 2


def _check_unit(name: str, x: float) -> float:
    x = float(x)
    if not (math.isfinite(x) and 0.0 <= x <= 1.0):
        raise ValueError(f"{name} must lie in [0, 1], got {x}")
    return x


@dataclass(frozen=True)
class RankingBoundaries:
    k: float
    b_inner: Optional[float]
    b_mid: float
    b_outer: float

    @property
    def union_regime(self) -> bool:
        """True when ``k >= 1/3``: the seven-row ranking applies."""
        return self.b_inner is not None


def boundaries(q: float) -> RankingBoundaries:
    k = bias(_check_unit("q", q))
    b_inner = None
    # k = 1/3 itself belongs to the seven-row regime (b_inner = 0 there)
    if k >= 1.0 / 3.0 - _K_EPS:
        b_inner = math.sqrt(max(0.0, (3.0 * k - 1.0) / (1.0 + 3.0 * k)))
    return RankingBoundaries(
        k=k,
        b_inner=b_inner,
        b_mid=math.sqrt(k / (1.0 + k)),
        b_outer=math.sqrt((1.0 + k) / (3.0 + k)),
    )


def pauli_fidelities(p: float, q: float, u: float) -> dict[str, float]:
    src = TwoLetterSource(p, q)
    return {
        "X": fe_two_letter(src, ChannelSpec.pauli_x(u)).value,
        "Z": fe_two_letter(src, ChannelSpec.dephasing(u)).value,
        "D": fe_two_letter(src, ChannelSpec.depolarizing(u)).value,
    }


@dataclass(frozen=True)
class ChannelOrdering:
    """Labels from highest to lowest fidelity.

    ``ties[i]`` marks ``labels[i]`` and ``labels[i + 1]`` as equal.
    """

    labels: tuple
    ties: tuple = (False, False)

    def __post_init__(self):
        labels = tuple(self.labels)
        if sorted(labels) != sorted(LABELS):
            raise ValueError(f"ordering must be a permutation of {LABELS}, got {labels}")
        if len(self.ties) != len(labels) - 1:
            raise ValueError("need one tie flag per adjacent pair")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "ties", tuple(bool(t) for t in self.ties))

    @classmethod
    def parse(cls, text: str) -> "ChannelOrdering":
        """Read ``"Z >= D >= X"`` / ``"D ≥ X = Z"`` style strings."""
        labels, ties = [], []
        for tok in re.findall(r">=|≥|=|\S", text):
            if tok in LABELS:
                labels.append(tok)
            elif tok in (">=", "≥", "="):
                ties.append(tok == "=")
            else:
                raise ValueError(f"cannot parse ordering {text!r}")
        return cls(tuple(labels), tuple(ties))

    def __str__(self) -> str:
        out = self.labels[0]
        for tie, lab in zip(self.ties, self.labels[1:]):
            out += (" = " if tie else " ≥ ") + lab
        return out

    def position(self, label: str) -> int:
        return self.labels.index(label)

    def is_consistent(self, values: dict[str, float], tol: float = TIE_TOL) -> bool:
        """Whether ``values`` satisfy every ``>=`` (and ``=``) link of this ordering."""
        for tie, hi, lo in zip(self.ties, self.labels, self.labels[1:]):
            diff = values[hi] - values[lo]
            if diff < -tol or (tie and abs(diff) > tol):
                return False
        return True


def order_values(values: dict[str, float], tol: float = TIE_TOL) -> ChannelOrdering:
    ranked = sorted(LABELS, key=lambda lab: (-values[lab], LABELS.index(lab)))
    # tied neighbours are listed in canonical X, Z, D order
    groups = [[ranked[0]]]
    for lab in ranked[1:]:
        if abs(values[groups[-1][-1]] - values[lab]) <= tol:
            groups[-1].append(lab)
        else:
            groups.append([lab])
    labels, ties = [], []
    for g in groups:
        g.sort(key=LABELS.index)
        if labels:
            ties.append(False)
        ties.extend([True] * (len(g) - 1))
        labels.extend(g)
    return ChannelOrdering(tuple(labels), tuple(ties))


def rank_at(p: float, q: float, u: float, tol: float = TIE_TOL) -> ChannelOrdering:
    _check_unit("p", p)
    _check_unit("q", q)
    u = float(u)
    if not (0.0 < u <= 1.0):
        raise ValueError(f"u must lie in (0, 1]; u = 0 is the identity channel, got {u}")
    return order_values(pauli_fidelities(p, q, u), tol)


@dataclass(frozen=True)
class RankingRow:
    lo: float
    hi: float
    ordering: ChannelOrdering
    closed: bool = False  # True when the row includes ``hi`` (last row only)

    def contains(self, p: float) -> bool:
        return self.lo <= p < self.hi or (self.closed and p == self.hi)

    def __str__(self) -> str:
        right = "]" if self.closed else ")"
        return f"[{self.lo:.12g}, {self.hi:.12g}{right}  {self.ordering}"


_ZDX = ChannelOrdering(("Z", "D", "X"))
_DZX = ChannelOrdering(("D", "Z", "X"))
_DXZ = ChannelOrdering(("D", "X", "Z"))
_XDZ = ChannelOrdering(("X", "D", "Z"))


def _rows(offsets, orderings) -> list[RankingRow]:
    """Rows for symmetric breakpoints ``1/2 -+ b/2``; ``offsets`` run outermost first."""
    left = [0.5 - 0.5 * b for b in offsets]
    right = [0.5 + 0.5 * b for b in reversed(offsets)]
    edges = [0.0] + left + right + [1.0]
    rows = []
    for lo, hi, ordering in zip(edges, edges[1:], orderings):
        rows.append(RankingRow(lo, hi, ordering))
    rows[-1] = RankingRow(rows[-1].lo, 1.0, rows[-1].ordering, closed=True)
    # drop empty intervals, keeping the closed final row
    return [r for r in rows if r.hi > r.lo or r.closed]


def union_table(q: float) -> list[RankingRow]:
    """Seven-row ranking for ``k >= 1/3``."""
    b = boundaries(q)
    if b.b_inner is None:
        raise ValueError(f"q = {q} lies in the central regime; the seven-row table does not apply")
    return _rows(
        [b.b_outer, b.b_mid, b.b_inner],
        [_ZDX, _DZX, _DXZ, _XDZ, _DXZ, _DZX, _ZDX],
    )


def central_table(q: float) -> list[RankingRow]:
    """Five-row ranking for ``k < 1/3``."""
    b = boundaries(q)
    return _rows([b.b_outer, b.b_mid], [_ZDX, _DZX, _DXZ, _DZX, _ZDX])


def single_letter_table() -> list[RankingRow]:
    """Three-row ranking for ``q`` in ``{0, 1}``."""
    return _rows([1.0 / math.sqrt(2.0)], [_ZDX, _XDZ, _ZDX])


def ranking_table(q: float) -> list[RankingRow]:
    q = _check_unit("q", q)
    if q in (0.0, 1.0):
        return single_letter_table()
    if boundaries(q).union_regime:
        return union_table(q)
    return central_table(q)


@dataclass
class TableReport:
    q: float
    u: float
    agreements: int = 0
    disagreements: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.disagreements


def _interior_samples(lo: float, hi: float, n: int) -> np.ndarray:
    if hi - lo > 2 * SAMPLE_MARGIN:
        return np.linspace(lo + SAMPLE_MARGIN, hi - SAMPLE_MARGIN, n)
    return np.array([0.5 * (lo + hi)])


def verify_table(q: float, samples_per_interval: int = 25, u: float = 1.0) -> TableReport:
    """Check every row of :func:`ranking_table` against direct evaluation.

    A row agrees at a sample when the computed fidelities satisfy the row's
    ``>=`` chain up to :data:`TIE_TOL`; numerically tied values therefore
    never count as a disagreement.
    """
    if samples_per_interval < 1:
        raise ValueError("samples_per_interval must be positive")
    report = TableReport(q=q, u=u)
    for row in ranking_table(q):
        for p in _interior_samples(row.lo, row.hi, samples_per_interval):
            p = float(p)
            values = pauli_fidelities(p, q, u)
            if row.ordering.is_consistent(values):
                report.agreements += 1
            else:
                report.disagreements.append((p, row.ordering, rank_at(p, q, u)))
    return report


@dataclass(frozen=True)
class BreakpointCheck:
    p: float
    pair: tuple
    gap: float

    @property
    def ok(self) -> bool:
        return self.gap <= BREAKPOINT_TOL


def breakpoint_checks(q: float, u: float = 1.0) -> list[BreakpointCheck]:
    """At each interior breakpoint, the gap between every pair whose order flips."""
    rows = ranking_table(q)
    checks = []
    for left, right in zip(rows, rows[1:]):
        p = right.lo
        values = pauli_fidelities(p, q, u)
        for i, a in enumerate(LABELS):
            for b in LABELS[i + 1 :]:
                before = left.ordering.position(a) < left.ordering.position(b)
                after = right.ordering.position(a) < right.ordering.position(b)
                if before != after:
                    checks.append(BreakpointCheck(p, (a, b), abs(values[a] - values[b])))
    return checks

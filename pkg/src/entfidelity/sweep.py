"""One-parameter sweeps of the two-letter fidelity, written as CSV or JSON."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional, TextIO

import numpy as np

from .channels import ChannelError, ChannelSpec, Family
from .source import TwoLetterSource, fe_two_letter

VARIABLES = ("p", "q", "u", "gamma")
DEFAULTS = {"q": 0.75, "u": 0.5, "gamma": 0.5}
DEFAULT_STEPS = 201


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def required_parameters(family: Family) -> set:
    """Scalar parameters a two-letter sweep of ``family`` needs, besides P."""
    param = family.parameter
    return {"p", "q"} | ({param} if param in ("u", "gamma") else set())


@dataclass(frozen=True)
class SweepSpec:
    """Sweep ``variable`` over ``[lo, hi]`` with the rest held in ``fixed``.

    ``family`` names the channel; a Weyl sweep carries its matrix in ``P``.
    """

    family: Family
    variable: str
    lo: float = 0.0
    hi: float = 1.0
    steps: int = DEFAULT_STEPS
    fixed: dict = field(default_factory=dict)
    P: Optional[tuple] = None

    def __post_init__(self):
        fam = self.family if isinstance(self.family, Family) else Family.parse(self.family)
        object.__setattr__(self, "family", fam)
        if self.variable not in VARIABLES:
            raise ValueError(f"variable must be one of {VARIABLES}, got {self.variable!r}")
        if not (0.0 <= self.lo <= self.hi <= 1.0):
            raise ValueError(f"need 0 <= lo <= hi <= 1, got [{self.lo}, {self.hi}]")
        if self.steps < 2:
            raise ValueError(f"steps must be at least 2, got {self.steps}")
        required = self.required()
        if self.variable not in required:
            raise ValueError(f"{fam.value} has no parameter {self.variable!r} to sweep")
        fixed = dict(self.fixed)
        missing = required - {self.variable} - set(fixed)
        extra = set(fixed) - (required - {self.variable})
        if missing:
            raise ValueError(f"missing fixed parameter(s): {', '.join(sorted(missing))}")
        if extra:
            raise ValueError(f"parameter(s) not used by this sweep: {', '.join(sorted(extra))}")
        for k, v in fixed.items():
            if not 0.0 <= float(v) <= 1.0:
                raise ValueError(f"{k} must lie in [0, 1], got {v}")
        object.__setattr__(self, "fixed", {k: float(fixed[k]) for k in sorted(fixed)})
        if fam is Family.WEYL and self.P is None:
            raise ValueError("a Weyl sweep needs the probability matrix P")

    def required(self) -> set:
        return required_parameters(self.family)

    def xs(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.steps)

    def channel_dict(self) -> dict:
        out = {"family": self.family.value}
        if self.P is not None:
            out["P"] = [list(r) for r in self.P]
        return out

    def evaluate(self, x: float) -> float:
        params = dict(self.fixed)
        params[self.variable] = float(x)
        kwargs = {k: params[k] for k in ("u", "gamma") if k in params}
        if self.P is not None:
            kwargs["P"] = self.P
        spec = ChannelSpec(self.family, **kwargs)
        return fe_two_letter(TwoLetterSource(params["p"], params["q"]), spec).value


def run_sweep(spec: SweepSpec) -> list[tuple[float, float]]:
    return [(float(x), spec.evaluate(x)) for x in spec.xs()]


def write_csv(spec: SweepSpec, points, out: TextIO) -> None:
    out.write(f"# channel: {json.dumps(spec.channel_dict())}\n")
    out.write(f"# fixed: {json.dumps(spec.fixed)}\n")
    out.write(f"# variable: {spec.variable}\n")
    out.write("x,fe\n")
    for x, fe in points:
        out.write(f"{fmt(x)},{fmt(fe)}\n")


def write_json(spec: SweepSpec, points, out: TextIO) -> None:
    doc = {
        "channel": spec.channel_dict(),
        "fixed": spec.fixed,
        "variable": spec.variable,
        "points": [{"x": float(fmt(x)), "fe": float(fmt(fe))} for x, fe in points],
    }
    json.dump(doc, out, indent=2)
    out.write("\n")


def read_csv(text: str) -> tuple[SweepSpec, list[tuple[float, float]]]:
    """Parse a sweep CSV back into its spec and points (steps taken from the row count)."""
    meta, rows = {}, []
    for line in text.splitlines():
        if not line.strip():
            continue
        if line.startswith("#"):
            key, _, value = line[1:].partition(":")
            meta[key.strip()] = value.strip()
        elif line.strip() == "x,fe":
            continue
        else:
            x, fe = line.split(",")
            rows.append((float(x), float(fe)))
    try:
        channel = json.loads(meta["channel"])
        fixed = json.loads(meta["fixed"])
        variable = meta["variable"]
    except (KeyError, json.JSONDecodeError) as exc:
        raise ChannelError(f"sweep file header is incomplete: {exc}") from None
    spec = SweepSpec(
        family=channel["family"],
        variable=variable,
        lo=rows[0][0],
        hi=rows[-1][0],
        steps=len(rows),
        fixed=fixed,
        P=tuple(tuple(r) for r in channel["P"]) if "P" in channel else None,
    )
    return spec, rows

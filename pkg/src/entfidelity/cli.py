"""Command-line front end.

Exit status: 0 on success, 1 when a validation or verification fails (or the
output cannot be written), 2 on usage and parameter errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .channels import ChannelError, ChannelSpec, Family, build, validate
from .fidelity import FidelityError, cross_check, fe_closed_form, fe_kraus, fe_oracle
from .ranking import (
    CENTRAL_Q,
    breakpoint_checks,
    central_table,
    rank_at,
    ranking_table,
    single_letter_table,
    union_table,
    verify_table,
)
from .source import TwoLetterSource, fe_two_letter, source_state
from .state import QubitStateParams, StateError, qubit_state
from .sweep import (
    DEFAULT_STEPS,
    DEFAULTS,
    SweepSpec,
    required_parameters,
    run_sweep,
    write_csv,
    write_json,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
VERIFY_SAMPLES = 25
VERIFY_US = (0.1, 1.0)


class UsageError(Exception):
    pass


def num(x: float) -> str:
    """Shortest repr that round-trips, for console output."""
    return repr(float(x))


def parse_complex(text: str) -> complex:
    """Parse ``RE+IMi`` style input such as ``0.1-0.2i``, ``0.3`` or ``-0.5i``."""
    s = text.strip().replace(" ", "")
    if "j" in s.lower() or "(" in s:
        raise UsageError(f"cannot parse complex number {text!r}; expected e.g. 0.1+0.2i")
    if s.endswith("i"):
        s = s[:-1] + "j"
    try:
        return complex(s)
    except ValueError:
        raise UsageError(f"cannot parse complex number {text!r}; expected e.g. 0.1+0.2i") from None


def _parse_weyl(text: str):
    """``P`` as JSON ``[[p00, p01], [p10, p11]]`` or four comma-separated numbers in that order."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError:
        data = [float(v) for v in text.split(",")]
    if isinstance(data, list) and len(data) == 4 and not isinstance(data[0], list):
        data = [data[:2], data[2:]]
    return data


def _add_channel_args(p: argparse.ArgumentParser, with_params: bool = True) -> None:
    g = p.add_argument_group("channel")
    g.add_argument("--channel", help="family name, e.g. pauli-x, dephasing, depolarizing, "
                   "werner-holevo, weyl, amplitude-damping, identity")
    g.add_argument("--spec-file", type=Path, help="channel spec as a JSON file")
    if with_params:
        g.add_argument("--u", type=float, help="error probability (Pauli families)")
        g.add_argument("--gamma", type=float, help="damping probability")
    g.add_argument("--P", dest="P", help="Weyl matrix: JSON [[p00,p01],[p10,p11]] or p00,p01,p10,p11")


def _channel_spec(args) -> ChannelSpec:
    if args.spec_file is not None:
        if args.channel:
            raise UsageError("give either --channel or --spec-file, not both")
        try:
            text = args.spec_file.read_text()
        except OSError as exc:
            raise UsageError(f"cannot read spec file: {exc}") from None
        return ChannelSpec.from_json(text)
    if not args.channel:
        raise UsageError("a channel is required (--channel or --spec-file)")
    fam = Family.parse(args.channel)
    P = _parse_weyl(args.P) if args.P is not None else None
    return ChannelSpec(fam, u=getattr(args, "u", None), gamma=getattr(args, "gamma", None), P=P)


def _state(args):
    """Either a ``QubitStateParams`` or a ``TwoLetterSource`` from the state flags."""
    given_ac = args.a is not None or args.c is not None
    given_pq = args.p is not None or args.q is not None
    if sum([given_ac, given_pq, args.mixed]) != 1:
        raise UsageError("specify the state with exactly one of --a/--c, --p/--q, or --mixed")
    if args.mixed:
        return QubitStateParams(0.5, 0j)
    if given_ac:
        if args.a is None:
            raise UsageError("--c needs --a")
        return QubitStateParams(args.a, parse_complex(args.c) if args.c is not None else 0j)
    if args.p is None or args.q is None:
        raise UsageError("a two-letter source needs both --p and --q")
    return TwoLetterSource(args.p, args.q)


def cmd_fidelity(args, out) -> int:
    spec = _channel_spec(args)
    state = _state(args)
    if isinstance(state, TwoLetterSource):
        params = source_state(state)
        closed = fe_two_letter(state, spec).value
    else:
        params = state
        closed = fe_closed_form(params, spec).value
    rho, ch = qubit_state(params), build(spec)
    if args.method == "closed":
        out.write(num(closed) + "\n")
    elif args.method == "kraus":
        out.write(num(fe_kraus(rho, ch).value) + "\n")
    elif args.method == "oracle":
        out.write(num(fe_oracle(rho, ch).value) + "\n")
    else:
        kraus, oracle = fe_kraus(rho, ch).value, fe_oracle(rho, ch).value
        vals = (closed, kraus, oracle)
        out.write(f"closed {num(closed)}\nkraus {num(kraus)}\noracle {num(oracle)}\n")
        out.write(f"max_spread {num(max(vals) - min(vals))}\n")
    return EXIT_OK


def cmd_validate(args, out) -> int:
    spec = _channel_spec(args)
    report = validate(build(spec), tol=args.tol)
    out.write(f"channel {spec.to_json()}\n")
    out.write(f"tp_residual {num(report.tp_residual)}\n")
    out.write(f"min_choi_eigenvalue {num(report.min_choi_eigenvalue)}\n")
    out.write(f"ok {str(report.ok).lower()}\n")
    return EXIT_OK if report.ok else EXIT_FAIL


def _sweep_spec(args) -> SweepSpec:
    if args.spec_file is not None or args.channel is None:
        base = _channel_spec(args) if args.spec_file is not None else None
        if base is None:
            raise UsageError("a channel is required (--channel or --spec-file)")
        fam, P = base.family, base.P
        preset = {k: getattr(base, k) for k in ("u", "gamma") if getattr(base, k) is not None}
        # a value stored in the spec file gives way to the swept variable
        preset.pop(args.var, None)
    else:
        fam = Family.parse(args.channel)
        P = _parse_weyl(args.P) if args.P is not None else None
        preset = {}
    explicit = {k: getattr(args, k) for k in ("p", "q", "u", "gamma") if getattr(args, k) is not None}
    explicit = {**preset, **explicit}
    if args.var in explicit:
        raise UsageError(f"--{args.var} is the swept variable and cannot also be fixed")
    needed = required_parameters(fam) - {args.var}
    unused = set(explicit) - needed
    if unused:
        raise UsageError(
            f"{fam.value} sweep over {args.var} does not use: {', '.join('--' + k for k in sorted(unused))}"
        )
    fixed = {k: explicit.get(k, DEFAULTS.get(k)) for k in needed}
    if "p" in needed and fixed["p"] is None:
        raise UsageError("--p is required unless p is swept")
    try:
        return SweepSpec(fam, args.var, args.lo, args.hi, args.steps, fixed,
                         P=ChannelSpec(Family.WEYL, P=P).P if P is not None else None)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_sweep(args, out) -> int:
    spec = _sweep_spec(args)
    points = run_sweep(spec)
    writer = write_csv if args.format == "csv" else write_json
    if args.output is None:
        writer(spec, points, out)
        return EXIT_OK
    try:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            writer(spec, points, fh)
    except OSError as exc:
        sys.stderr.write(f"error: cannot write {args.output}: {exc}\n")
        return EXIT_FAIL
    return EXIT_OK


def cmd_rank(args, out) -> int:
    q = args.q
    if not 0.0 <= q <= 1.0:
        raise UsageError(f"q must lie in [0, 1], got {q}")
    if args.mode == "at":
        if args.p is None or args.u is None:
            raise UsageError("--mode at needs --p and --u")
        if args.u == 0:
            raise UsageError("u must be nonzero: u = 0 is the identity channel")
        out.write(f"{rank_at(args.p, q, args.u)}\n")
        return EXIT_OK
    if args.mode == "table":
        for row in ranking_table(q):
            out.write(f"{row}\n")
        return EXIT_OK
    us = (args.u,) if args.u is not None else VERIFY_US
    failed = False
    for u in us:
        rep = verify_table(q, VERIFY_SAMPLES, u)
        gaps = breakpoint_checks(q, u)
        worst = max((c.gap for c in gaps), default=0.0)
        bad = [c for c in gaps if not c.ok]
        out.write(
            f"q={num(q)} u={num(u)} agreements={rep.agreements} "
            f"disagreements={len(rep.disagreements)} max_breakpoint_gap={worst:.3e}\n"
        )
        for p, expected, got in rep.disagreements:
            out.write(f"  p={num(p)} expected {expected} got {got}\n")
        failed = failed or bool(rep.disagreements) or bool(bad)
    return EXIT_FAIL if failed else EXIT_OK


TABLE1 = [
    ("Random Pauli-X", "1 + u[4 Re(c)^2 - 1]", ChannelSpec.pauli_x),
    ("Dephasing", "1 + u[(a - b)^2 - 1]", ChannelSpec.dephasing),
    ("Depolarizing", "1 + u[|c|^2 + (a - b)^2/4 - 3/4]", ChannelSpec.depolarizing),
    ("Generalized Pauli (Weyl)", "p00 + 4 p10 Re(c)^2 + p01 (a - b)^2 + 4 p11 Im(c)^2", None),
    ("Amplitude damping", "gamma |c|^2 + (a + b sqrt(1 - gamma))^2", ChannelSpec.amplitude_damping),
    ("Werner-Holevo", "4 Im(c)^2", None),
]
TABLE2 = [
    "1 + u[4 (2q-1)^2 p(1-p) - 1]",
    "1 + 4u p(p-1)",
    "1 + u[(2q-1)^2 p(1-p) + (2p-1)^2/4 - 3/4]",
    "p00 + 4 p10 (2q-1)^2 p(1-p) + p01 (2p-1)^2",
    "p^2 + (1-gamma)(1-p)^2 + p(1-p)[2 sqrt(1-gamma) + gamma (2q-1)^2]",
    "0",
]


def _table_specs(u: float):
    return [
        ChannelSpec.pauli_x(u),
        ChannelSpec.dephasing(u),
        ChannelSpec.depolarizing(u),
        ChannelSpec.weyl(0.4, 0.3, 0.2, 0.1),
        ChannelSpec.amplitude_damping(u),
        ChannelSpec.werner_holevo(),
    ]


def cmd_tables(args, out) -> int:
    u = args.u
    params = QubitStateParams(args.a, parse_complex(args.c))
    src = TwoLetterSource(args.p, args.q)
    specs = _table_specs(u)
    w = out.write
    w(f"Single-qubit fidelities: F_e(rho, N) for rho = [[a, c], [conj(c), b]]; "
      f"values at a={num(params.a)}, c={params.c}, u=gamma={num(u)}, "
      f"P=[[0.4,0.2],[0.3,0.1]]\n")
    for (name, expr, _), spec in zip(TABLE1, specs):
        chk = cross_check(params, spec)
        w(f"  {name:<26} {expr:<52} closed={chk.closed:.12f} oracle={chk.oracle:.12f}\n")
    w(f"\nTwo-letter source fidelities; values at p={num(src.p)}, q={num(src.q)}\n")
    for (name, _, _), expr, spec in zip(TABLE1, TABLE2, specs):
        val = fe_two_letter(src, spec).value
        w(f"  {name:<26} {expr:<66} {val:.12f}\n")
    q3 = args.q_union
    w(f"\nRanking, seven-row regime (q outside {CENTRAL_Q[0]:.6f}..{CENTRAL_Q[1]:.6f}), at q={num(q3)}:\n")
    for row in union_table(q3):
        w(f"  {row}\n")
    q4 = args.q_central
    w(f"\nRanking, five-row regime (q inside {CENTRAL_Q[0]:.6f}..{CENTRAL_Q[1]:.6f}), at q={num(q4)}:\n")
    for row in central_table(q4):
        w(f"  {row}\n")
    w("\nRanking, single-letter q (q = 0 or q = 1):\n")
    for row in single_letter_table():
        w(f"  {row}\n")
    w(f"\nRanking at common states, u={num(u)}:\n")
    for q, p, name in [(1, 1, "|0>"), (1, 0, "|1>"), (1, 0.5, "|+>"), (0, 0.5, "|->")]:
        w(f"  q={q} p={p:<4} {name:<4} {rank_at(p, q, u)}\n")
    w(f"  Bell-state reduction (p = q = 1/2): {rank_at(0.5, 0.5, u)}\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="entfidelity", description="Entanglement fidelity of single-qubit channels."
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fidelity", help="entanglement fidelity of a state through a channel")
    _add_channel_args(p)
    g = p.add_argument_group("state")
    g.add_argument("--a", type=float, help="population of |0>")
    g.add_argument("--c", help="coherence, e.g. 0.1+0.2i")
    g.add_argument("--p", type=float, help="two-letter source: weight of |0> in each letter")
    g.add_argument("--q", type=float, help="two-letter source: probability of |psi+>")
    g.add_argument("--mixed", action="store_true", help="maximally mixed state I/2")
    p.add_argument("--method", choices=["closed", "kraus", "oracle", "all"], default="closed")
    p.set_defaults(func=cmd_fidelity)

    p = sub.add_parser("sweep", help="fidelity of the two-letter source along one parameter")
    _add_channel_args(p, with_params=False)
    p.add_argument("--var", choices=["p", "q", "u", "gamma"], default="p")
    p.add_argument("--lo", type=float, default=0.0)
    p.add_argument("--hi", type=float, default=1.0)
    p.add_argument("--steps", type=int, default=DEFAULT_STEPS)
    for name in ("p", "q", "u", "gamma"):
        default = DEFAULTS.get(name)
        hint = f" (default {default})" if default is not None else ""
        p.add_argument(f"--{name}", type=float, help=f"fixed value of {name}{hint}")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--output", "-o", help="output path (default: stdout)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("validate", help="check complete positivity and trace preservation")
    _add_channel_args(p)
    p.add_argument("--tol", type=float, default=1e-10)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("rank", help="rank the Pauli-X, dephasing and depolarizing channels")
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--mode", choices=["table", "verify", "at"], default="table")
    p.add_argument("--p", type=float)
    p.add_argument("--u", type=float)
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("tables", help="print the regenerated fidelity and ranking tables")
    p.add_argument("--u", type=float, default=0.5)
    p.add_argument("--a", type=float, default=0.7)
    p.add_argument("--c", default="0.1+0.2i")
    p.add_argument("--p", type=float, default=0.25)
    p.add_argument("--q", type=float, default=0.75)
    p.add_argument("--q-union", type=float, default=0.05)
    p.add_argument("--q-central", type=float, default=0.4)
    p.set_defaults(func=cmd_tables)
    return parser


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, out)
    except (UsageError, ChannelError, StateError, FidelityError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

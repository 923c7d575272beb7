"""Command-line entry point: ``cvteamwork <command> ...``.

Exit codes: 0 success or affirmative verdict, 1 negative verdict, 2 usage
or input error.  Mode labels on the command line and in JSON are 1-based.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from . import circuits, graphs, mmes, teamwork
from .symplectic import NotPhysicalError

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def number(text: str) -> float:
    """Decimal or exact fraction such as ``1/3``."""
    try:
        return float(Fraction(text.strip()))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _labels(text: str) -> list[int]:
    try:
        labels = [int(v) for v in text.replace(" ", "").split(",") if v]
    except ValueError:
        raise InputError(f"bad mode list {text!r}") from None
    if not labels:
        raise InputError("empty mode list")
    return labels


_SPEC = re.compile(r"^\s*([a-z0-9_]+)\s*(?:[(:]\s*([^)]*?)\s*\)?)?\s*$", re.IGNORECASE)


def _parse_spec(text: str) -> tuple[str, list[str]]:
    m = _SPEC.match(text)
    if not m:
        raise InputError(f"cannot parse {text!r}")
    args = [a for a in (m.group(2) or "").split(",") if a.strip()]
    return m.group(1).lower(), [a.strip() for a in args]


def _num(text: str) -> float:
    try:
        return number(text)
    except argparse.ArgumentTypeError as exc:
        raise InputError(str(exc)) from None


def _emit(text: str, output: Optional[str]) -> None:
    if output:
        with open(output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- commands ---------------------------------------------------------------------


def cmd_check_mmes(args) -> int:
    omega = graphs.read_adjacency(args.input)
    report = mmes.is_perfect_mmes(
        omega, args.mode, count=args.samples, seed=args.seed, workers=args.workers
    )
    _emit(report.to_json() + "\n", args.output)
    return EXIT_OK if report.verdict else EXIT_NEGATIVE


def cmd_family(args) -> int:
    if args.kind == "toeplitz":
        omega = graphs.toeplitz_family(args.n)
    elif args.kind == "complete":
        omega = graphs.complete_unweighted(args.n)
    else:
        omega = graphs.random_graph(args.n, args.bound, args.seed)
    _emit(graphs.format_adjacency(omega, args.format), args.output)
    return EXIT_OK


def cmd_fidelity_curve(args) -> int:
    if args.steps < 2:
        raise InputError("--steps must be at least 2")
    if not 0 < args.t < 1:
        raise InputError("--t must lie in (0, 1)")
    if args.z < 0 or args.r_min < 0 or args.r_max <= args.r_min:
        raise InputError("need z >= 0 and 0 <= r-min < r-max")
    grid = np.linspace(args.r_min, args.r_max, args.steps)
    rows = teamwork.fidelity_curve(args.t, args.z, grid)
    _emit(teamwork.format_curve_csv(rows), args.output)
    return EXIT_OK


def cmd_typicality(args) -> int:
    if args.trials < 1:
        raise InputError("--trials must be at least 1")
    if args.mode == "exhaustive" and args.n > args.cap:
        raise InputError(f"exhaustive scan refused for N = {args.n} > {args.cap}; use --mode sampled")
    if args.mode == "sampled" and (args.samples is None or args.samples < 1):
        raise InputError("--mode sampled needs --samples >= 1")
    result = mmes.typicality_scan(
        args.n, args.trials, args.seed, args.mode, args.samples, args.bound, n_cap=args.cap, workers=args.workers
    )
    _emit(json.dumps(result.to_dict()) + "\n", args.output)
    return EXIT_OK


def _resource(spec: str, r: Optional[float]):
    try:
        kind, params = _parse_spec(spec)
    except InputError:
        kind, params = "", []
    if kind == "psi4" and len(params) == 2:
        return circuits.psi4(_num(params[0]), _num(params[1])), spec
    if kind == "tmss" and len(params) == 1:
        return circuits.tmss_cm(_num(params[0])), spec
    graph_kinds = {"toeplitz": graphs.toeplitz_family, "complete": graphs.complete_unweighted}
    if kind in graph_kinds and len(params) == 1:
        omega = graph_kinds[kind](int(params[0]))
    elif kind == "twenty" and not params:
        omega = graphs.twenty_mode_fixture()
    else:
        omega = graphs.read_adjacency(spec)
    if r is None:
        raise InputError("graph resources need --r")
    return graphs.graph_state_cm(omega, r), spec


def _input_state(spec: str):
    kind, params = _parse_spec(spec)
    if kind == "tmss" and len(params) == 1:
        return circuits.tmss_cm(_num(params[0]))
    if kind == "ghz" and len(params) == 2:
        return circuits.ghz_input_cm(int(params[0]), _num(params[1]))
    if kind == "vacuum" and len(params) == 1:
        return circuits.vacuum(int(params[0]))
    raise InputError(f"unknown input {spec!r}; expected tmss(z), ghz(K,z) or vacuum(K)")


def cmd_teamwork(args) -> int:
    resource, label = _resource(args.resource, args.r)
    n = resource.shape[0] // 2
    labels = _labels(args.block_a) if args.block_a else [1]
    if any(not 1 <= m <= n for m in labels):
        raise InputError(f"mode labels must lie in 1..{n}")
    p = mmes.Bipartition.canonical([m - 1 for m in labels], n)
    cov_in = _input_state(args.input)
    if cov_in.shape[0] // 2 != p.k:
        raise InputError(f"input has {cov_in.shape[0] // 2} modes but team A has {p.k}")
    assignment = [m - 1 for m in _labels(args.assign)] if args.assign else None
    report = teamwork.teamwork_fidelity(resource, p, cov_in, assignment=assignment, label=args.input)
    out = report.to_dict()
    out["resource"] = label
    _emit(json.dumps(out) + "\n", args.output)
    return EXIT_OK


# -- parser -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cvteamwork", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-mmes", help="certify the perfect-MMES rank condition of an adjacency file")
    p.add_argument("input")
    p.add_argument("--mode", choices=["exhaustive", "sampled"], default="exhaustive")
    p.add_argument("--samples", type=int, default=None, help="bipartitions to draw in sampled mode")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--output")
    p.set_defaults(func=cmd_check_mmes)

    p = sub.add_parser("family", help="write an adjacency matrix from a built-in family")
    p.add_argument("kind", choices=["toeplitz", "complete", "random"])
    p.add_argument("n", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--bound", type=int, default=None, help="weight bound for random graphs (default N)")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--output")
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("fidelity-curve", help="teamwork fidelity of psi4 for the three 2|2 splits")
    p.add_argument("--t", type=number, default=1 / 3)
    p.add_argument("--z", type=number, default=2.0)
    p.add_argument("--r-min", type=number, default=0.0)
    p.add_argument("--r-max", type=number, default=3.0)
    p.add_argument("--steps", type=int, default=100)
    p.add_argument("--output")
    p.set_defaults(func=cmd_fidelity_curve)

    p = sub.add_parser("typicality", help="perfect-MMES fraction among random integer graphs")
    p.add_argument("n", type=int)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mode", choices=["exhaustive", "sampled"], default="exhaustive")
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--bound", type=int, default=None)
    p.add_argument("--cap", type=int, default=mmes.EXHAUSTIVE_CAP, help="largest N allowed in exhaustive mode")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--output")
    p.set_defaults(func=cmd_typicality)

    p = sub.add_parser("teamwork", help="teleport an input state between two teams of a resource")
    p.add_argument("--resource", required=True,
                   help="psi4(r,t), tmss(r), toeplitz(N), complete(N), twenty, or an adjacency file")
    p.add_argument("--r", type=number, default=None, help="squeezing of graph resources")
    p.add_argument("--block-a", default=None, help="1-based modes of the sending team, e.g. 1,2")
    p.add_argument("--input", required=True, help="tmss(z), ghz(K,z) or vacuum(K)")
    p.add_argument("--assign", default=None, help="channel used by each input mode, 1-based (default 1,2,...)")
    p.add_argument("--output")
    p.set_defaults(func=cmd_teamwork)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except graphs.AdjacencyFormatError as exc:
        print(f"error: {args_input(args)}: {exc}", file=sys.stderr)
    except (InputError, NotPhysicalError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    return EXIT_INPUT


def args_input(args) -> str:
    return getattr(args, "input", None) or getattr(args, "resource", "")


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

Subcommands: optimize {ec|wec|we}, simulate {naive|functional}, sweep,
adversary {exit|witness}, verify, serve.  Exit status contract: 0 success,
1 verification failure, 2 infeasible input, 3 I/O or parse error.

Tolerance resolution order: --tol flag, then a `tol=` line in the config
file, then the EVAC_TOL environment variable, then the built-in 1e-10.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import ops
from .adversary import adversarial_exit, infeasibility_witness, parse_strategy
from .errors import (HorizonTooShortError, InfeasibleError,
                     NonConvergenceError, StrategyFormatError)
from .model import DEFAULT_TOL
from .sweep import SweepSpec, write_sweep
from .verify import SUITE_NAMES, run_verification

EXIT_OK = 0
EXIT_VERIFY_FAIL = 1
EXIT_INFEASIBLE = 2
EXIT_IO = 3


def _read_config(path: str | None) -> dict[str, str]:
    if not path:
        return {}
    cfg = {}
    try:
        with open(path) as fh:
            for ln in fh:
                ln = ln.strip()
                if not ln or ln.startswith("#") or "=" not in ln:
                    continue
                key, _, value = ln.partition("=")
                cfg[key.strip()] = value.strip()
    except OSError as exc:
        raise SystemExit(_fail(f"cannot read config: {exc}", EXIT_IO))
    return cfg


def _resolve_tol(args, cfg: dict[str, str]) -> float:
    if getattr(args, "tol", None) is not None:
        return args.tol
    if "tol" in cfg:
        return float(cfg["tol"])
    env = os.environ.get("EVAC_TOL")
    if env:
        return float(env)
    return DEFAULT_TOL


def _fail(msg: str, code: int) -> int:
    print(f"error: {msg}", file=sys.stderr)
    return code


def _emit(doc: dict) -> None:
    sys.stdout.write(json.dumps(doc, indent=2) + "\n")


def _parse_range(text: str) -> tuple[float, float]:
    lo, sep, hi = text.partition(":")
    if not sep:
        raise ValueError(f"range must look like lo:hi, got {text!r}")
    return float(lo), float(hi)


def _load_strategy(path: str):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise SystemExit(_fail(f"cannot read strategy: {exc}", EXIT_IO))
    return parse_strategy(text)


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_optimize(args, cfg) -> int:
    try:
        doc = ops.optimize_document(args.problem, b=args.b, c=args.c, e=args.e)
    except InfeasibleError:
        return _fail(f"infeasible: bc < 3 (b={args.b}, c={args.c})", EXIT_INFEASIBLE)
    except ValueError as exc:
        return _fail(str(exc), EXIT_IO)
    _emit(doc)
    return EXIT_OK if doc["verified"] else EXIT_VERIFY_FAIL


def cmd_simulate(args, cfg) -> int:
    tol = _resolve_tol(args, cfg)
    try:
        outcome = ops.run_simulation(args.algo, args.d, s=args.s, r=args.r,
                                     e=args.e, side=args.side,
                                     maxspeed=args.maxspeed, c=args.c, tol=tol)
    except ValueError as exc:
        return _fail(str(exc), EXIT_IO)
    except NonConvergenceError as exc:
        return _fail(str(exc), EXIT_VERIFY_FAIL)
    _emit(outcome.as_dict())
    return EXIT_OK  # infeasible inputs still simulate; flags live in the JSON


def cmd_sweep(args, cfg) -> int:
    tol = _resolve_tol(args, cfg)
    try:
        lo, hi = _parse_range(args.range)
        scale = {"lin": "linear", "geo": "geometric"}[args.scale]
        spec = SweepSpec(args.parameter, lo, hi, args.points, scale,
                         problem=args.problem, e=args.e)
    except (ValueError, KeyError) as exc:
        return _fail(str(exc), EXIT_IO)
    try:
        write_sweep(spec, args.out, tol)
    except InfeasibleError as exc:
        return _fail(str(exc), EXIT_INFEASIBLE)
    except OSError as exc:
        return _fail(f"cannot write {args.out}: {exc}", EXIT_IO)
    return EXIT_OK


def cmd_adversary(args, cfg) -> int:
    try:
        strategy = _load_strategy(args.strategy)
    except StrategyFormatError as exc:
        return _fail(str(exc), EXIT_IO)
    try:
        if args.mode == "exit":
            report = adversarial_exit(strategy, args.d)
        else:
            report = infeasibility_witness(args.b, args.c, strategy)
    except HorizonTooShortError as exc:
        return _fail(str(exc), EXIT_INFEASIBLE)
    except ValueError as exc:
        return _fail(str(exc), EXIT_IO)
    _emit(report.as_dict())
    return EXIT_OK


def cmd_verify(args, cfg) -> int:
    tol = _resolve_tol(args, cfg)
    suites = [args.suite] if args.suite else None
    try:
        report = run_verification(suites, grid=args.grid, tol=tol)
    except ValueError as exc:
        return _fail(str(exc), EXIT_IO)
    sys.stdout.write(report.render())
    return EXIT_OK if report.passed else EXIT_VERIFY_FAIL


def cmd_serve(args, cfg) -> int:
    import uvicorn

    from .api import app
    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="evacline",
        description="Two-robot line-search time/energy trade-offs: optimal "
                    "speeds, simulation, sweeps, adversarial bounds.")
    parser.add_argument("--config", help="flat key=value config file")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("optimize", help="closed form + numerical cross-check")
    p.add_argument("problem", choices=["ec", "wec", "we"])
    p.add_argument("--b", type=float, default=1.0)
    p.add_argument("--c", type=float)
    p.add_argument("--e", type=float)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("simulate", help="run one search and report the outcome")
    p.add_argument("algo", choices=["naive", "functional"])
    p.add_argument("--d", type=float, required=True)
    p.add_argument("--s", type=float)
    p.add_argument("--r", type=float)
    p.add_argument("--e", type=float)
    p.add_argument("--c", type=float, help="optional time bound factor")
    p.add_argument("--side", choices=["positive", "negative"], default="positive")
    p.add_argument("--maxspeed", type=float, default=1.0)
    p.add_argument("--tol", type=float)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="write a CSV over a parameter range")
    p.add_argument("parameter", choices=["cb", "e", "d"])
    p.add_argument("--range", required=True, help="lo:hi")
    p.add_argument("--points", type=int, required=True)
    p.add_argument("--scale", choices=["lin", "geo"], default="lin")
    p.add_argument("--out", required=True)
    p.add_argument("--problem", choices=["wec", "we"],
                   help="which problem an e sweep targets")
    p.add_argument("--e", type=float, help="budget for a d sweep")
    p.add_argument("--tol", type=float)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("adversary", help="worst-case exit placement")
    p.add_argument("mode", choices=["exit", "witness"])
    p.add_argument("--strategy", required=True, help="strategy file path")
    p.add_argument("--d", type=float, help="candidate distance (exit mode)")
    p.add_argument("--b", type=float, help="speed cap (witness mode)")
    p.add_argument("--c", type=float, help="time factor (witness mode)")
    p.set_defaults(func=cmd_adversary)

    p = sub.add_parser("verify", help="run the self-verification suites")
    p.add_argument("--suite", choices=list(SUITE_NAMES))
    p.add_argument("--grid", type=int, default=200)
    p.add_argument("--tol", type=float)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("serve", help="start the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "adversary":
        if args.mode == "exit" and args.d is None:
            return _fail("adversary exit needs --d", EXIT_IO)
        if args.mode == "witness" and (args.b is None or args.c is None):
            return _fail("adversary witness needs --b and --c", EXIT_IO)
    cfg = _read_config(args.config)
    return args.func(args, cfg)


if __name__ == "__main__":
    sys.exit(main())

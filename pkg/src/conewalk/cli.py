"""Command-line front end: solve, verify-delta, walk-stats.

Instances travel as JSON files; reports are single-line JSON on stdout with
17-significant-digit floats, so identical flags produce identical bytes.
Exit codes: 0 optimal, 1 error, 2 infeasible, 3 unbounded.
"""
from __future__ import annotations

import argparse
import json
import statistics
import sys
from pathlib import Path

import numpy as np

from . import jsonio
from .errors import ConewalkError, Infeasible, TooLarge, Unbounded
from .lp import (
    LinearProgram,
    delta_bruteforce,
    delta_integer_bound,
    normalize,
)
from .reduction import solve
from .walk import WalkConfig

EXIT_OPTIMAL = 0
EXIT_ERROR = 1
EXIT_INFEASIBLE = 2
EXIT_UNBOUNDED = 3


class CliError(ConewalkError):
    pass


def load_lp_file(path: str) -> tuple[LinearProgram, dict]:
    """Read an instance file; returns the program and the raw record."""
    try:
        raw = json.loads(Path(path).read_text())
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise CliError(f"{path} is not valid JSON: {exc}") from exc
    for key in ("n", "m", "A", "b", "c"):
        if key not in raw:
            raise CliError(f"{path} is missing required field {key!r}")
    try:
        A = np.array(raw["A"], dtype=float)
        b = np.array(raw["b"], dtype=float)
        c = np.array(raw["c"], dtype=float)
    except (TypeError, ValueError) as exc:
        raise CliError(f"{path} has malformed arrays: {exc}") from exc
    if A.shape != (raw["m"], raw["n"]) or b.shape != (raw["m"],) \
            or c.shape != (raw["n"],):
        raise CliError(f"{path}: array shapes disagree with n/m")
    try:
        program = LinearProgram(A=A, b=b, c=c)
    except (ConewalkError, ValueError) as exc:
        raise CliError(f"{path}: {exc}") from exc
    return program, raw


def write_lp_file(path: str, lp: LinearProgram, *, name: str = "",
                  integral: bool | None = None, Delta: int | None = None) -> None:
    record: dict = {"name": name, "n": lp.n, "m": lp.m,
                    "A": [[float(x) for x in row] for row in lp.A],
                    "b": [float(x) for x in lp.b],
                    "c": [float(x) for x in lp.c]}
    if integral is not None:
        record["integral"] = bool(integral)
    if Delta is not None:
        record["Delta"] = int(Delta)
    Path(path).write_text(jsonio.json_line(record))


def _auto_or(value: str, kind, what: str):
    if value == "auto":
        return None
    try:
        return kind(value)
    except ValueError as exc:
        raise CliError(f"--{what} must be a number or 'auto'") from exc


def _resolve_delta(spec: str, lp: LinearProgram, raw: dict) -> tuple[float, str]:
    if spec == "brute":
        cert = delta_bruteforce(normalize(lp))
        return cert.delta, cert.method.value
    if spec == "bound":
        if not raw.get("integral") or "Delta" not in raw:
            raise CliError("--delta bound needs 'integral': true and a "
                           "'Delta' field in the instance file")
        cert = delta_integer_bound(lp.A, int(raw["Delta"]))
        return cert.delta, cert.method.value
    if spec == "auto":
        try:
            cert = delta_bruteforce(normalize(lp))
            return cert.delta, cert.method.value
        except TooLarge:
            if raw.get("integral") and "Delta" in raw:
                cert = delta_integer_bound(lp.A, int(raw["Delta"]))
                return cert.delta, cert.method.value
            raise CliError("instance too large for brute-force delta; pass "
                           "--delta <value> or add an integral Delta field")
    try:
        return float(spec), "provided"
    except ValueError as exc:
        raise CliError("--delta must be a number, 'auto', 'brute' or "
                       "'bound'") from exc


def _error_report(message: str) -> dict:
    return {"status": "error", "error": message}


def _solve_once(lp: LinearProgram, raw: dict, args) -> tuple[dict, int]:
    delta_value, delta_method = _resolve_delta(args.delta, lp, raw)
    trace_stream = open(args.trace, "w") if getattr(args, "trace", None) else None
    cfg = WalkConfig(
        alpha=_auto_or(args.alpha, float, "alpha"),
        steps=_auto_or(args.steps, int, "steps"),
        seed=args.seed,
        step_constant=args.step_constant,
        trace=trace_stream,
    )
    try:
        report = solve(lp, cfg, delta=delta_value, radius=args.radius_value,
                       max_retries=args.max_retries)
    except Infeasible as exc:
        return ({"status": "infeasible", "witness_iteration": exc.iteration,
                 "witness_value": exc.value, "delta": delta_value,
                 "delta_method": delta_method, "seed": args.seed},
                EXIT_INFEASIBLE)
    except Unbounded as exc:
        return ({"status": "unbounded", "box_row": exc.box_row,
                 "delta": delta_value, "delta_method": delta_method,
                 "seed": args.seed}, EXIT_UNBOUNDED)
    finally:
        if trace_stream is not None:
            trace_stream.close()
    labels = [lp.row_labels[p] for p in report.basis]
    return ({
        "status": "optimal",
        "basis": labels,
        "x": [float(t) for t in report.x],
        "value": report.value,
        "delta": delta_value,
        "delta_method": delta_method,
        "walk": {
            "alpha": report.alpha,
            "steps_per_level": list(report.steps_per_level),
            "pivots": report.pivots,
            "retries": report.retries,
        },
        "seed": report.seed,
    }, EXIT_OPTIMAL)


def cmd_solve(args) -> int:
    lp, raw = load_lp_file(args.input)
    report, code = _solve_once(lp, raw, args)
    print(jsonio.dumps(report))
    return code


def cmd_verify_delta(args) -> int:
    lp, raw = load_lp_file(args.input)
    if args.method == "brute":
        cert = delta_bruteforce(normalize(lp))
        j, subset = cert.witness
        record = {"delta": cert.delta, "method": cert.method.value,
                  "witness_row": lp.row_labels[j],
                  "witness_subset": [lp.row_labels[i] for i in subset]}
    else:
        if not raw.get("integral") or "Delta" not in raw:
            raise CliError("method 'bound' needs 'integral': true and a "
                           "'Delta' field in the instance file")
        cert = delta_integer_bound(lp.A, int(raw["Delta"]))
        record = {"delta": cert.delta, "method": cert.method.value,
                  "Delta": cert.Delta}
    print(jsonio.dumps(record))
    return EXIT_OPTIMAL


def cmd_walk_stats(args) -> int:
    instances = []
    for path in args.input:
        lp, raw = load_lp_file(path)
        per_seed = []
        base = args.seed
        for seed in range(base, base + args.seeds):
            run_args = argparse.Namespace(**{**vars(args), "seed": seed,
                                             "trace": None})
            report, code = _solve_once(lp, raw, run_args)
            per_seed.append({
                "seed": seed,
                "status": report["status"],
                "pivots": report.get("walk", {}).get("pivots"),
                "retries": report.get("walk", {}).get("retries"),
            })
        solved = [r for r in per_seed if r["status"] == "optimal"]
        pivot_counts = [r["pivots"] for r in solved]
        instances.append({
            "name": raw.get("name", Path(path).name),
            "m": lp.m,
            "n": lp.n,
            "seeds": args.seeds,
            "success_rate": sum(1 for r in solved if r["retries"] == 0)
            / args.seeds,
            "mean_pivots": float(np.mean(pivot_counts)) if pivot_counts else None,
            "median_pivots": float(statistics.median(pivot_counts))
            if pivot_counts else None,
            "per_seed": per_seed,
        })
    print(jsonio.dumps({"instances": instances}))
    return EXIT_OPTIMAL


def _add_solver_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--steps", default="auto",
                   help="walk steps per level (default: auto)")
    p.add_argument("--step-constant", dest="step_constant", type=float,
                   default=1.0, help="constant C in the auto step budget")
    p.add_argument("--alpha", default="auto",
                   help="objective scaling (default: auto)")
    p.add_argument("--delta", default="auto",
                   help="row separation: a number, 'auto', 'brute' or 'bound'")
    p.add_argument("--radius", default="auto",
                   help="bounding-box radius (default: auto)")
    p.add_argument("--max-retries", dest="max_retries", type=int, default=10)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="conewalk",
        description="Randomized-walk simplex solver for max c^T x, Ax <= b")
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="solve an instance file")
    p_solve.add_argument("--input", required=True)
    p_solve.add_argument("--trace", default=None,
                         help="write a line-delimited JSON walk trace here "
                              "(every attempt; the step counter restarts "
                              "per walk)")
    _add_solver_flags(p_solve)
    p_solve.set_defaults(func=cmd_solve)

    p_delta = sub.add_parser("verify-delta",
                             help="certify the row-separation value")
    p_delta.add_argument("--input", required=True)
    p_delta.add_argument("--method", choices=("brute", "bound"),
                         default="brute")
    p_delta.set_defaults(func=cmd_verify_delta)

    p_stats = sub.add_parser("walk-stats",
                             help="aggregate solver runs over many seeds")
    p_stats.add_argument("--input", action="append", required=True,
                         help="instance file (repeatable)")
    p_stats.add_argument("--seeds", type=int, default=100)
    _add_solver_flags(p_stats)
    p_stats.set_defaults(func=cmd_walk_stats)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if hasattr(args, "radius"):
            args.radius_value = _auto_or(args.radius, float, "radius")
        return args.func(args)
    except CliError as exc:
        print(jsonio.dumps(_error_report(str(exc))))
        return EXIT_ERROR
    except ConewalkError as exc:
        print(jsonio.dumps(_error_report(f"{type(exc).__name__}: {exc}")))
        return EXIT_ERROR


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()

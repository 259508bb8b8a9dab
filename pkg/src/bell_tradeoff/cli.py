"""Command-line front-end.

Subcommands: ``measures``, ``check``, ``realize``, ``region``, ``fuzz``,
``oracle``, ``reduce``.  Output is machine-first (JSON or CSV) with all
floats at 12 significant digits; ``--pretty`` adds a human rendering
where it helps.

Exit codes (stable scripting contract):
  0  success / all checks pass
  1  a mathematical check failed (potential counterexample)
  2  invalid arguments or infeasible request
  3  I/O or format error

``BELL_TRADEOFF_TOL`` overrides the default check tolerance of 1e-9.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import __version__
from .bounds import (
    check_cardinality_bound,
    check_hiddenness_floor,
    check_relaxed_bound,
    check_tradeoff_point,
    region,
    region_boundary_samples,
    TradeoffPoint,
)
from .construct import InfeasiblePointError, realize, realization_deltas, reduce_input
from .fuzz import CHECKS, run_fuzz
from .measures import measure_report
from .model import HiddenInput, InvalidModelError, ModelError, load_model, save_model
from .oracle import brute_force_sopt

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INVALID_REQUEST = 2
EXIT_IO_ERROR = 3

DEFAULT_TOL = 1e-9


def _tolerance(explicit: float | None) -> float:
    if explicit is not None:
        return explicit
    env = os.environ.get("BELL_TRADEOFF_TOL")
    if env:
        try:
            return float(env)
        except ValueError as exc:
            raise SystemExit(f"bad BELL_TRADEOFF_TOL: {env!r}") from exc
    return DEFAULT_TOL


def fmt(x: float) -> str:
    return f"{x:.12g}"


def _round_floats(obj):
    if isinstance(obj, float):
        return float(fmt(obj))
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    if isinstance(obj, (np.floating,)):
        return float(fmt(float(obj)))
    if isinstance(obj, (np.integer,)):
        return int(obj)
    return obj


def _print_json(data, pretty: bool) -> None:
    print(json.dumps(_round_floats(data), indent=2 if pretty else None))


def _load_input(path) -> HiddenInput:
    model = load_model(path)
    if not isinstance(model, HiddenInput):
        raise InvalidModelError([])
    return model


# --- subcommands --------------------------------------------------------------


def cmd_measures(args) -> int:
    try:
        inp = _load_input(args.file)
    except (OSError, ValueError, ModelError) as exc:
        print(f"error: cannot read input model: {exc}", file=sys.stderr)
        return EXIT_IO_ERROR
    report = measure_report(inp)
    if args.pretty:
        for key, value in report.to_dict().items():
            print(f"{key:>8} = {fmt(value) if isinstance(value, float) else value}")
    else:
        _print_json(report.to_dict(), pretty=False)
    return EXIT_OK


def cmd_check(args) -> int:
    tol = _tolerance(args.tol)
    try:
        inp = _load_input(args.file)
    except (OSError, ValueError, ModelError) as exc:
        print(f"error: cannot read input model: {exc}", file=sys.stderr)
        return EXIT_IO_ERROR
    report = measure_report(inp)
    m, h, s = report.m, report.h, report.s_opt

    relaxed = check_relaxed_bound(m, h, s, tol)
    point = check_tradeoff_point(TradeoffPoint(m, h, s), tol)
    cardinality = check_cardinality_bound(inp, tol)
    floor_ok = check_hiddenness_floor(m, h, tol)

    lines = [
        ("relaxed_chsh_bound", relaxed.ok, f"slack={fmt(relaxed.slack)}"),
        (
            "tradeoff_region",
            point.ok,
            " ".join(f"{k}={fmt(v)}" for k, v in point.slacks.items()),
        ),
        ("cardinality_bound", cardinality.ok, f"bound={fmt(cardinality.bound)} n={inp.n}"),
        ("hiddenness_floor", floor_ok, f"slack={fmt(h - m / 8.0)}"),
    ]
    all_ok = True
    for name, ok, detail in lines:
        all_ok &= ok
        print(f"{name} {'PASS' if ok else 'FAIL'} {detail}")
    return EXIT_OK if all_ok else EXIT_CHECK_FAILED


def cmd_realize(args) -> int:
    try:
        inp = realize(args.m, args.h, args.s)
    except InfeasiblePointError as exc:
        print(f"error: {exc.slack_name} < 0 ({fmt(exc.slack_value)}): point not realizable", file=sys.stderr)
        return EXIT_INVALID_REQUEST
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID_REQUEST
    deltas = realization_deltas(inp, args.m, args.h, args.s)
    summary = {"n": inp.n, "deltas": deltas}
    if args.out:
        try:
            save_model(inp, args.out)
        except OSError as exc:
            print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
            return EXIT_IO_ERROR
        _print_json(summary, pretty=args.pretty)
    else:
        _print_json(inp.to_json(), pretty=args.pretty)
        print(json.dumps(_round_floats(summary)), file=sys.stderr)
    return EXIT_OK


def cmd_region(args) -> int:
    try:
        spec = region(args.kind, args.k)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID_REQUEST
    if args.kind == "polyhedron":
        rows = np.asarray(spec.vertices)
        header = "m,h,s"
    else:
        samples = region_boundary_samples(spec, args.step)
        rows = samples.points
        header = "m,h"
    lines = [header] + [",".join(fmt(v) for v in row) for row in rows]
    text = "\n".join(lines) + "\n"
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
            return EXIT_IO_ERROR
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_fuzz(args) -> int:
    tol = _tolerance(args.tol)
    if args.trials < 1 or args.max_lambdas < 1:
        print("error: --trials and --max-lambdas must be >= 1", file=sys.stderr)
        return EXIT_INVALID_REQUEST
    checks = tuple(args.checks) if args.checks else CHECKS
    try:
        report = run_fuzz(args.trials, args.seed, args.max_lambdas, checks=checks, tol=tol)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID_REQUEST
    payload = report.to_dict()
    if report.failures:
        # serialize the offending inputs so failures are reproducible
        from .oracle import sample_input

        for rec in payload["failures"]:
            rec["input"] = sample_input(rec["n"], rec["seed"]).to_json()
    _print_json(payload, pretty=args.pretty)
    return EXIT_OK if report.ok else EXIT_CHECK_FAILED


def cmd_oracle(args) -> int:
    try:
        inp = _load_input(args.file)
    except (OSError, ValueError, ModelError) as exc:
        print(f"error: cannot read input model: {exc}", file=sys.stderr)
        return EXIT_IO_ERROR
    report = measure_report(inp)
    brute = brute_force_sopt(inp)
    delta = brute.value - report.s_opt
    _print_json(
        {
            "s_opt_closed_form": report.s_opt,
            "s_opt_brute_force": brute.value,
            "delta": delta,
            "pattern": brute.pattern,
        },
        pretty=args.pretty,
    )
    return EXIT_OK if abs(delta) <= 1e-12 else EXIT_CHECK_FAILED


def cmd_reduce(args) -> int:
    try:
        inp = _load_input(args.file)
    except (OSError, ValueError, ModelError) as exc:
        print(f"error: cannot read input model: {exc}", file=sys.stderr)
        return EXIT_IO_ERROR
    if inp.n < 3:
        print("error: reduction needs an input with at least 3 hidden variables", file=sys.stderr)
        return EXIT_INVALID_REQUEST
    result = reduce_input(inp)
    trace = [
        {"stage": stage.name, "f": stage.f, "n": stage.table.shape[0]}
        for stage in result.stages
    ]
    if args.out:
        try:
            save_model(result.reduced, args.out)
        except OSError as exc:
            print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
            return EXIT_IO_ERROR
    _print_json(trace, pretty=args.pretty)
    return EXIT_OK


# --- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bell-tradeoff",
        description="Measurement-dependence / hiddenness / CHSH trade-offs for separable hidden-variable models.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("measures", help="scalar measures of an input model file")
    p.add_argument("file")
    p.add_argument("--pretty", action="store_true")
    p.set_defaults(func=cmd_measures)

    p = sub.add_parser("check", help="run all inequality checks on an input model")
    p.add_argument("file")
    p.add_argument("--tol", type=float, default=None)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("realize", help="construct a model with given (m, h, s)")
    p.add_argument("m", type=float)
    p.add_argument("h", type=float)
    p.add_argument("s", type=float)
    p.add_argument("--out", default=None)
    p.add_argument("--pretty", action="store_true")
    p.set_defaults(func=cmd_realize)

    p = sub.add_parser("region", help="export region boundary / vertex CSV")
    p.add_argument("--kind", choices=("wk", "wk0", "polyhedron"), required=True)
    p.add_argument("--k", type=float, default=None, help="parameter k or k0 in [0, 2]")
    p.add_argument("--step", type=float, default=0.01)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_region)

    p = sub.add_parser("fuzz", help="random search for counterexamples")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-lambdas", type=int, default=6)
    p.add_argument("--checks", nargs="*", choices=CHECKS, default=None)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--pretty", action="store_true")
    p.set_defaults(func=cmd_fuzz)

    p = sub.add_parser("oracle", help="brute-force optimal CHSH value vs closed form")
    p.add_argument("file")
    p.add_argument("--pretty", action="store_true")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("reduce", help="merge two hidden variables; print the F trace")
    p.add_argument("file")
    p.add_argument("--out", default=None)
    p.add_argument("--pretty", action="store_true")
    p.set_defaults(func=cmd_reduce)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


def entry_point() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry_point()

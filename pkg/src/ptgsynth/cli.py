"""Command-line front end: ``ptgsynth MODEL [options]``.

Exit status: 0 when synthesis terminated (fixpoint or initial state
covered), 2 when a budget or timeout stopped it early (the printed
constraint is then a sound partial answer), 1 on input errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path

from .geometry import Region
from .model import ModelError
from .oracle import oracle_verdict
from .parser import ParseError, constraint_atoms, parse_model, print_constraint
from .semantics import SemanticsError
from .solver import Options, solve

log = logging.getLogger("ptgsynth")

EXIT_OK, EXIT_ERROR, EXIT_PARTIAL = 0, 1, 2


def _parse_points(text: str, params: tuple[str, ...]) -> list[dict[str, Fraction]]:
    """``p1=1,p2=1/2;p1=3,p2=0`` -> list of full valuations."""
    points = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        vals: dict[str, Fraction] = {}
        for item in chunk.split(","):
            name, sep, value = item.partition("=")
            name = name.strip()
            if not sep or name not in params:
                raise ValueError(f"bad parameter assignment {item.strip()!r}")
            vals[name] = Fraction(value.strip())
        missing = [p for p in params if p not in vals]
        if missing:
            raise ValueError(f"point {chunk!r} misses {', '.join(missing)}")
        points.append(vals)
    return points


def _fmt_point(vals: dict[str, Fraction]) -> str:
    return ",".join(f"{k}={v}" for k, v in vals.items())


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="ptgsynth",
        description="Synthesize the parameter valuations under which the controller "
                    "of a parametric timed game can force a visit to a goal location.")
    ap.add_argument("model", type=Path, help="model file")
    ap.add_argument("--opt", default="inc",
                    help="comma-separated optimizations among inc,cm,cv,lp (default: inc); "
                         "use --opt '' to disable all")
    ap.add_argument("--timeout", type=float, help="wall-clock budget in seconds")
    ap.add_argument("--max-states", type=int, help="stop after this many explored symbolic states")
    ap.add_argument("--format", choices=("text", "json"), default="text")
    ap.add_argument("--report-incremental", action="store_true",
                    help="print every growth of the winning parameter region")
    ap.add_argument("--check-invariants", action="store_true",
                    help="check the algorithm invariants after every step (slow)")
    ap.add_argument("--oracle-check", metavar="POINTS",
                    help="compare the result with the brute-force oracle at points "
                         "like 'p1=1,p2=2;p1=0,p2=1/2'")
    ap.add_argument("--strict-grammar", action="store_true",
                    help="reject clock-difference atoms in guards and invariants")
    ap.add_argument("--fair", action="store_true",
                    help="round-robin between exploration and update steps")
    return ap


def run(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    if args.timeout is not None and args.timeout <= 0:
        print("error: --timeout must be positive", file=err)
        return EXIT_ERROR
    try:
        text = args.model.read_text(encoding="utf-8")
    except OSError as exc:
        print(f"error: cannot read {args.model}: {exc}", file=err)
        return EXIT_ERROR
    try:
        ptg, objective = parse_model(text, strict_grammar=args.strict_grammar)
    except ParseError as exc:
        print(f"{args.model}:{exc}", file=err)
        return EXIT_ERROR
    try:
        opts = Options.from_names(args.opt.split(","), timeout=args.timeout,
                                  max_states=args.max_states,
                                  check_invariants=args.check_invariants,
                                  report_each_update=args.report_incremental, fair=args.fair)
        points = _parse_points(args.oracle_check, ptg.params) if args.oracle_check else []
    except ValueError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_ERROR

    def progress(kind: str, payload: object) -> None:
        if kind == "param" and args.report_incremental and args.format == "text":
            assert isinstance(payload, Region)
            print(f"progress: {print_constraint(payload)}", file=out, flush=True)

    try:
        result = solve(ptg, objective, opts, listener=progress)
    except (ModelError, SemanticsError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_ERROR

    checks = []
    for vals in points:
        member = result.winning_param.contains_point(vals)
        verdict = oracle_verdict(ptg, objective, vals)
        checks.append((vals, member, verdict))

    partial = not result.terminated
    if args.format == "json":
        doc = {
            "terminated": result.terminated,
            "reason": result.termination_reason,
            "partial": partial,
            "winning_param": constraint_atoms(result.winning_param),
            "stats": result.stats,
        }
        if args.report_incremental:
            doc["incremental"] = [constraint_atoms(r) for r in result.history]
        if args.check_invariants:
            doc["violations"] = [str(v) for v in result.violations]
        if points:
            doc["oracle_check"] = [
                {"point": {k: str(v) for k, v in vals.items()}, "in_region": member,
                 "oracle": None if verdict is None else verdict}
                for vals, member, verdict in checks]
        json.dump(doc, out, indent=2)
        out.write("\n")
    else:
        print(f"terminated: {str(result.terminated).lower()}", file=out)
        print(f"reason: {result.termination_reason}", file=out)
        if partial:
            print("partial: true", file=out)
        print(f"constraint: {print_constraint(result.winning_param)}", file=out)
        s = result.stats
        pr = s["prunes"]
        print(f"stats: states={s['states']} iterations={s['iterations']} updates={s['updates']} "
              f"prunes(cm={pr['cm']}, cv={pr['cv']}, inc={pr['inc']}) "
              f"time={s['wall_time']:.3f}s", file=out)
        if args.check_invariants:
            print(f"invariant violations: {len(result.violations)}", file=out)
            for v in result.violations:
                print(f"  {v}", file=out)
        for vals, member, verdict in checks:
            oracle = {True: "win", False: "lose", None: "inapplicable"}[verdict]
            agree = "" if verdict is None else ("agree" if verdict == member else "DISAGREE")
            print(f"oracle {_fmt_point(vals)}: region={'in' if member else 'out'} "
                  f"oracle={oracle} {agree}".rstrip(), file=out)
    if result.violations:
        for v in result.violations:
            print(f"error: {v}", file=err)
        return EXIT_ERROR
    return EXIT_PARTIAL if partial else EXIT_OK


def main() -> None:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    sys.exit(run())


if __name__ == "__main__":
    main()

"""Command-line entry point: ``invcheck run | infer | check``."""

from __future__ import annotations

import argparse
import json
import pprint
import sys
from pathlib import Path
from typing import Sequence

from .compiler import emit_clp
from .frontend import FrontendError, ProgramAst, parse_program
from .inference import EmptyTraceSet, infer
from .interpreter import DEFAULT_STEP_BUDGET, Diverged, Fault, read_suite, read_traces, run, run_suite, write_traces
from .invariants import InvariantSyntaxError, format_invariant, parse_invariant, parse_invariants
from .refute import DISPROVED, PROVED, CheckConfig, Verdict, check_all
from .ssa import pretty_print_ssa, to_ssa

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_FAULT = 2
EXIT_BUDGET = 3
EXIT_DISPROVED = 4
EXIT_UNKNOWN = 5


def verdict_exit_code(verdicts: Sequence[Verdict]) -> int:
    kinds = {v.kind for v in verdicts}
    if DISPROVED in kinds:
        return EXIT_DISPROVED
    if kinds - {PROVED}:
        return EXIT_UNKNOWN
    return EXIT_OK


def _positive(kind):
    def conv(text: str):
        v = kind(text)
        if v <= 0:
            raise argparse.ArgumentTypeError(f"must be positive: {text}")
        return v

    return conv


def _width(text: str) -> int:
    v = int(text)
    if not 2 <= v <= 32:
        raise argparse.ArgumentTypeError("width must be in 2..32")
    return v


def _common(p: argparse.ArgumentParser, default_width: int) -> None:
    p.add_argument("--width", type=_width, default=default_width, help=f"integer bit width (default {default_width})")
    p.add_argument("--step-budget", type=_positive(int), default=DEFAULT_STEP_BUDGET, help="interpreter step budget")
    p.add_argument("--emit", choices=("ast", "ssa", "clp", "none"), default="none", help="dump an intermediate form first")
    p.add_argument("--json-out", type=Path, help="write a machine-readable report here")
    p.add_argument("--seed", type=int, default=None, help="reserved; search is deterministic")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="invcheck", description="Run, infer invariants for, and check mini-language programs.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="execute a program on concrete inputs")
    p.add_argument("file", type=Path)
    p.add_argument("inputs", nargs="*", type=int)
    _common(p, 8)

    p = sub.add_parser("infer", help="report likely invariants from a test suite")
    p.add_argument("file", type=Path)
    p.add_argument("suite", type=Path, nargs="?", help="one input vector per line")
    p.add_argument("--traces", type=Path, help="read JSONL traces instead of running a suite")
    p.add_argument("--trace-out", type=Path, help="write the collected traces as JSONL")
    _common(p, 32)

    p = sub.add_parser("check", help="prove or refute invariants")
    p.add_argument("file", type=Path)
    p.add_argument("invariants", type=Path, help="one invariant per line")
    p.add_argument("--max-unfold", type=int, default=None, help="loop unfold budget (default 2*MAX_INT+4)")
    p.add_argument("--label-budget", type=_positive(int), default=10**6, help="labeling node budget")
    p.add_argument("--timeout", type=_positive(float), default=60.0, help="wall-clock seconds per invariant")
    p.add_argument("--propagation-budget", type=_positive(int), default=10**7)
    p.add_argument("--jobs", type=_positive(int), default=1, help="check invariants in parallel")
    _common(p, 8)
    return ap


def _load(path: Path) -> ProgramAst:
    return parse_program(path.read_text(encoding="utf-8"))


def _emit(ast: ProgramAst, what: str) -> None:
    if what == "ast":
        print(pprint.pformat(ast))
    elif what == "ssa":
        print(pretty_print_ssa(to_ssa(ast)), end="")
    elif what == "clp":
        print(emit_clp(to_ssa(ast)), end="")


def _write_json(path: Path | None, payload) -> None:
    if path is not None:
        path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")


def cmd_run(args: argparse.Namespace) -> int:
    ast = _load(args.file)
    _emit(ast, args.emit)
    try:
        res = run(ast, args.inputs, args.width, args.step_budget)
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE
    if isinstance(res, Fault):
        print(f"fault: {res.kind}")
        _write_json(args.json_out, {"outcome": "fault", "kind": res.kind})
        return EXIT_FAULT
    if isinstance(res, Diverged):
        print(f"diverged: step budget {args.step_budget} exhausted")
        _write_json(args.json_out, {"outcome": "diverged", "steps": res.steps})
        return EXIT_BUDGET
    print(res.value)
    _write_json(args.json_out, {"outcome": "returned", "return": res.value, "steps": res.trace.steps})
    return EXIT_OK


def cmd_infer(args: argparse.Namespace) -> int:
    ast = _load(args.file)
    _emit(ast, args.emit)
    if args.traces is not None:
        with args.traces.open(encoding="utf-8") as fh:
            traces = read_traces(fh)
    elif args.suite is not None:
        suite = read_suite(args.suite.read_text(encoding="utf-8"))
        res = run_suite(ast, suite, args.width, args.step_budget)
        for inputs, outcome in res.rejected:
            print(f"warning: excluded {list(inputs)}: {outcome}", file=sys.stderr)
        traces = res.traces
    else:
        print("error: give a suite file or --traces", file=sys.stderr)
        return EXIT_PARSE
    if args.trace_out is not None:
        with args.trace_out.open("w", encoding="utf-8") as fh:
            write_traces(traces, fh)
    try:
        found = infer(traces)
    except EmptyTraceSet:
        print("error: no terminating runs to infer from", file=sys.stderr)
        return EXIT_FAULT
    lines = [format_invariant(f) for f in found]
    for ln in lines:
        print(ln)
    _write_json(args.json_out, {"traces": len(traces), "invariants": lines})
    return EXIT_OK


def cmd_check(args: argparse.Namespace) -> int:
    ast = _load(args.file)
    _emit(ast, args.emit)
    texts = parse_invariants(args.invariants.read_text(encoding="utf-8"))
    for t in texts:
        try:
            parse_invariant(t)
        except InvariantSyntaxError as e:
            print(f"error: {args.invariants}: {t!r}: {e}", file=sys.stderr)
            return EXIT_PARSE
    cfg = CheckConfig(
        width=args.width,
        unfold_budget=args.max_unfold,
        label_budget=args.label_budget,
        wall_clock=args.timeout,
        propagation_budget=args.propagation_budget,
        step_budget=args.step_budget,
    )
    verdicts = check_all(ast, texts, cfg, jobs=args.jobs)
    for v in verdicts:
        print(f"{v.invariant}: {v.summary()}")
    _write_json(args.json_out, [v.to_record() for v in verdicts])
    return verdict_exit_code(verdicts)


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    handler = {"run": cmd_run, "infer": cmd_infer, "check": cmd_check}[args.command]
    try:
        return handler(args)
    except FrontendError as e:
        print(f"{args.file}:{e}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())

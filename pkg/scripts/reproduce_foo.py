"""Walk the foo example end to end: run, infer from the 25-case suite, then check."""

from __future__ import annotations

import argparse
from pathlib import Path

from invcheck import CheckConfig, check_all, emit_clp, format_invariant, infer, parse_program, run, run_suite, to_ssa
from invcheck.interpreter import read_suite

CORPUS = Path(__file__).resolve().parent.parent / "corpus"


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--width", type=int, default=8, help="bit width for checking")
    ap.add_argument("--show-network", action="store_true")
    args = ap.parse_args()

    foo = parse_program((CORPUS / "foo.mc").read_text())
    if args.show_network:
        print(emit_clp(to_ssa(foo)))
    print("foo(5, 3) =", run(foo, [5, 3]).value)

    suite = read_suite((CORPUS / "suite25.txt").read_text())
    found = [format_invariant(f) for f in infer(run_suite(foo, suite).traces)]
    print(f"\n{len(found)} likely invariants from {len(suite)} runs:")
    for text in found:
        print("  ", text)

    print(f"\nchecking at width {args.width}:")
    for v in check_all(foo, found, CheckConfig(width=args.width)):
        print(f"   {v.invariant:40} {v.summary():32} unfoldings={v.stats['unfoldings']} nodes={v.stats['label_nodes']}")


if __name__ == "__main__":
    main()

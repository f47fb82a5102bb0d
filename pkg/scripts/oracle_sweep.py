"""Compare the constraint model against brute-force execution over every input.

For each program, the solution set of the compiled network must equal the
interpreter's terminating input/output graph, and every pool invariant's
verdict must match its brute-force truth value.
"""

from __future__ import annotations

import argparse
import time
from itertools import product
from pathlib import Path

from invcheck import CheckConfig, Returned, check_invariant, format_invariant, generate_candidates, parse_program, run, solution_graph, to_ssa
from invcheck.inference import evaluate_invariant

CORPUS = Path(__file__).resolve().parent.parent / "corpus"


def sweep(path: Path, width: int, step_budget: int, invariants: bool) -> bool:
    ast = parse_program(path.read_text())
    lo, hi = -(1 << (width - 1)), (1 << (width - 1)) - 1
    t0 = time.perf_counter()
    traces, diverged = [], 0
    for inputs in product(range(lo, hi + 1), repeat=len(ast.params)):
        r = run(ast, inputs, width, step_budget)
        if isinstance(r, Returned):
            traces.append(r.trace)
        else:
            diverged += r.__class__.__name__ == "Diverged"
    brute = {(tuple(t.entry.values()), t.exit_return) for t in traces}
    ok = solution_graph(to_ssa(ast), width) == brute
    line = f"{path.stem:12} graph {'ok' if ok else 'MISMATCH'} ({len(brute)} pairs, {diverged} diverging)"
    if invariants and traces:
        bad = 0
        pool = generate_candidates(traces)
        cfg = CheckConfig(width=width, step_budget=step_budget)
        for f in pool:
            truth = all(evaluate_invariant(f, t) for t in traces)
            v = check_invariant(ast, f, cfg)
            expected = "proved" if truth else "disproved"
            # a diverging input keeps the model unbounded, so a true invariant may stay unknown
            allowed = {expected, "unknown"} if truth and diverged else {expected}
            if v.kind not in allowed:
                bad += 1
                print(f"    {format_invariant(f)}: {v.summary()} (expected {expected})")
        ok = ok and bad == 0
        line += f", invariants {len(pool) - bad}/{len(pool)} agree"
    print(f"{line}, {time.perf_counter() - t0:.1f} s", flush=True)
    return ok


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("programs", nargs="*", type=Path, help="default: every corpus/*.mc")
    ap.add_argument("--width", type=int, default=4)
    ap.add_argument("--step-budget", type=int, default=10_000)
    ap.add_argument("--no-invariants", action="store_true", help="only compare solution graphs")
    args = ap.parse_args()
    paths = args.programs or sorted(CORPUS.glob("*.mc"))
    results = [sweep(p, args.width, args.step_budget, not args.no_invariants) for p in paths]
    return 0 if all(results) else 1


if __name__ == "__main__":
    raise SystemExit(main())

"""Template-based likely-invariant inference at the function exit.

Candidates are instantiated from a fixed pool over the terms ``return`` and
``orig(p)`` for every parameter, using constants seen in the traces, then
kept only if every trace satisfies them.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from itertools import permutations
from typing import Sequence

from .invariants import Cmp, Formula, Implies, InvTerm, Lit, Orig, Ret, format_invariant, holds_on
from .interpreter import Trace

BINARY_OPS = ("==", "!=", "<", "<=", ">", ">=")


class EmptyTraceSet(ValueError):
    pass


@dataclass(frozen=True)
class InferenceConfig:
    # an implication is only reported if its antecedent held in this many traces
    min_antecedent_support: int = 2


def exit_terms(traces: Sequence[Trace]) -> list[InvTerm]:
    return [Ret()] + [Orig(p) for p in traces[0].entry]


def _value(t: InvTerm, tr: Trace) -> int:
    if isinstance(t, Ret):
        return tr.exit_return
    if isinstance(t, Lit):
        return t.value
    return tr.entry[t.name]


def _observed(t: InvTerm, traces: Sequence[Trace]) -> list[int]:
    return sorted({_value(t, tr) for tr in traces})


def generate_candidates(traces: Sequence[Trace]) -> list[Formula]:
    """Every pool instantiation, ordered by template, then terms, then constants."""
    if not traces:
        raise EmptyTraceSet("at least one trace is required")
    terms = exit_terms(traces)
    consts = {t: _observed(t, traces) for t in terms}
    out: list[Formula] = []
    for op in ("==", ">=", "<="):
        for t in terms:
            out.extend(Cmp(op, t, Lit(c)) for c in consts[t])
    for op in BINARY_OPS:
        for i, a in enumerate(terms):
            for b in terms[i + 1 :]:
                out.append(Cmp(op, a, b))
    for a, b in permutations(terms, 2):
        for ca in consts[a]:
            for cb in consts[b]:
                out.append(Implies(Cmp("==", a, Lit(ca)), Cmp("==", b, Lit(cb))))
    return out


def evaluate_invariant(f: Formula, trace: Trace) -> bool:
    return holds_on(f, trace.entry, trace.exit_return)


def filter_candidates(
    candidates: Sequence[Formula],
    traces: Sequence[Trace],
    cfg: InferenceConfig = InferenceConfig(),
) -> list[Formula]:
    """Candidates true on every trace, minus the ones subsumed by a stronger survivor."""
    alive = [f for f in candidates if all(evaluate_invariant(f, tr) for tr in traces)]
    alive_set = set(alive)

    # unary bounds: only the tightest; none at all if the term is constant
    constant_terms = {f.left for f in alive if _is_unary(f) and f.op == "=="}
    tightest: dict[tuple[InvTerm, str], int] = {}
    for f in alive:
        if _is_unary(f) and f.op in (">=", "<="):
            key = (f.left, f.op)
            pick = max if f.op == ">=" else min
            tightest[key] = pick(tightest.get(key, f.right.value), f.right.value)

    by_pair: dict[tuple[InvTerm, InvTerm], set[str]] = defaultdict(set)
    for f in alive:
        if isinstance(f, Cmp) and not _is_unary(f):
            by_pair[(f.left, f.right)].add(f.op)

    support: dict[Formula, int] = {}
    for f in alive:
        if isinstance(f, Implies) and f.left not in support:
            support[f.left] = sum(evaluate_invariant(f.left, tr) for tr in traces)

    out = []
    for f in alive:
        if isinstance(f, Implies):
            if support[f.left] < cfg.min_antecedent_support:
                continue
            if f.right in alive_set or f.left in alive_set:
                continue
        elif _is_unary(f):
            if f.op != "==" and (f.left in constant_terms or tightest[(f.left, f.op)] != f.right.value):
                continue
        else:
            if _weaker(f.op, by_pair[(f.left, f.right)]):
                continue
        out.append(f)
    return out


def _is_unary(f: Formula) -> bool:
    return isinstance(f, Cmp) and isinstance(f.right, Lit)


def _weaker(op: str, ops: set[str]) -> bool:
    """Whether a stronger surviving relation over the same pair implies `op`."""
    if op in ("<=", ">=") and "==" in ops:
        return True
    if op == "<=" and "<" in ops or op == ">=" and ">" in ops:
        return True
    if op == "!=" and ("<" in ops or ">" in ops):
        return True
    return False


def infer(traces: Sequence[Trace], cfg: InferenceConfig = InferenceConfig()) -> list[Formula]:
    return filter_candidates(generate_candidates(traces), traces, cfg)


def format_all(fs: Sequence[Formula]) -> list[str]:
    return [format_invariant(f) for f in fs]

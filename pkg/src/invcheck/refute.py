"""Decide whether a program satisfies an invariant by searching for a violation.

The negated invariant is posted on the program's constraint network.  If
propagation or exhaustive labeling shows there is no solution, the
invariant is proved; a solution is replayed on the interpreter and, when
confirmed, reported as a counter-example.  Budget events yield ``unknown``.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Sequence

from .compiler import CompiledProgram, compile_program, default_unfold_budget
from .constraints import COMPARE, Constraint, conj, disj, negate
from .domain import IntWidth
from .frontend import ProgramAst
from .interpreter import DEFAULT_STEP_BUDGET, Returned, run
from .invariants import (
    BoolOp,
    Cmp,
    Formula,
    Implies,
    InvTerm,
    Lit,
    Not,
    Orig,
    UnknownTerm,
    format_invariant,
    holds_on,
    parse_invariant,
)
from .solver import BudgetExhausted, Store, WallClockExceeded
from .ssa import to_ssa

PROVED = "proved"
DISPROVED = "disproved"
UNKNOWN = "unknown"
ERROR = "error"

LABEL_BUDGET = "LabelBudget"
UNFOLD_BUDGET = "UnfoldBudget"
PROPAGATION_BUDGET = "PropagationBudget"
WALL_CLOCK = "WallClock"


@dataclass(frozen=True)
class CheckConfig:
    width: int = 8
    unfold_budget: int | None = None  # None: 2 * MAX_INT + 4
    label_budget: int = 10**6
    wall_clock: float = 60.0
    propagation_budget: int = 10**7
    step_budget: int = DEFAULT_STEP_BUDGET

    def __post_init__(self) -> None:
        IntWidth(self.width)
        for name in ("label_budget", "wall_clock", "propagation_budget", "step_budget"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.unfold_budget is not None and self.unfold_budget < 0:
            raise ValueError("unfold_budget must be non-negative")

    @property
    def effective_unfold_budget(self) -> int:
        return default_unfold_budget(self.width) if self.unfold_budget is None else self.unfold_budget


@dataclass
class Verdict:
    invariant: str
    kind: str
    inputs: dict[str, int] | None = None
    output: int | None = None
    interpreter_confirmed: bool | None = None
    reason: str | None = None
    stats: dict[str, Any] = field(default_factory=dict)

    def summary(self) -> str:
        if self.kind == DISPROVED:
            args = ",".join(f"{k}={v}" for k, v in self.inputs.items())
            return f"disproved ({args} -> {self.output})"
        if self.kind == PROVED:
            return "proved"
        return f"{self.kind} ({self.reason})"

    def to_record(self) -> dict[str, Any]:
        rec: dict[str, Any] = {"invariant": self.invariant, "verdict": self.kind}
        if self.kind == DISPROVED:
            rec["counterexample"] = {"inputs": dict(self.inputs), "return": self.output}
            rec["interpreter_confirmed"] = self.interpreter_confirmed
        if self.reason is not None:
            rec["reason"] = self.reason
        rec["stats"] = dict(self.stats)
        return rec


def _term(t: InvTerm, cp: CompiledProgram):
    if isinstance(t, Lit):
        return t.value
    if isinstance(t, Orig):
        try:
            return cp.inputs[cp.param_names.index(t.name)]
        except ValueError:
            raise UnknownTerm(t.name) from None
    return cp.output


def formula_constraint(f: Formula, cp: CompiledProgram) -> Constraint:
    if isinstance(f, Cmp):
        return COMPARE[f.op](_term(f.left, cp), _term(f.right, cp))
    if isinstance(f, Not):
        return negate(formula_constraint(f.operand, cp))
    if isinstance(f, Implies):
        return disj(negate(formula_constraint(f.left, cp)), formula_constraint(f.right, cp))
    assert isinstance(f, BoolOp)
    left, right = formula_constraint(f.left, cp), formula_constraint(f.right, cp)
    return conj(left, right) if f.op == "&&" else disj(left, right)


def negate_invariant(f: Formula, cp: CompiledProgram) -> Constraint:
    """Negation-normal-form constraint over the network's inputs and output."""
    return negate(formula_constraint(f, cp))


def check_invariant(ast: ProgramAst, f: Formula | str, cfg: CheckConfig = CheckConfig()) -> Verdict:
    text = f if isinstance(f, str) else format_invariant(f)
    t0 = time.monotonic()
    try:
        formula = parse_invariant(f) if isinstance(f, str) else f
    except ValueError as e:
        return Verdict(text, ERROR, reason=f"syntax: {e}")
    store = Store(cfg.width, propagation_budget=cfg.propagation_budget, deadline=t0 + cfg.wall_clock)
    search = None

    def done(kind: str, **kw) -> Verdict:
        stats = {
            "unfoldings": store.stats.unfoldings,
            "label_nodes": search.nodes if search is not None else 0,
            "propagations": store.stats.propagations,
            "millis": round((time.monotonic() - t0) * 1000),
        }
        return Verdict(text, kind, stats=stats, **kw)

    try:
        cp = compile_program(to_ssa(ast), cfg.width, cfg.effective_unfold_budget, store)
        store.post(negate_invariant(formula, cp))
        search = store.search(list(cp.inputs) + [cp.output], cfg.label_budget)
        for sol in search:
            inputs = {p: sol[v] for p, v in zip(cp.param_names, cp.inputs)}
            res = run(ast, list(inputs.values()), cfg.width, cfg.step_budget)
            if isinstance(res, Returned) and not holds_on(formula, inputs, res.value):
                return done(DISPROVED, inputs=inputs, output=res.value, interpreter_confirmed=True)
            if not store.taints:
                return done(ERROR, inputs=inputs, output=sol[cp.output], interpreter_confirmed=False,
                            reason=f"solver solution not confirmed by interpreter ({res})")
            # a cut-short model admits spurious outputs; the run above settles these inputs either way
            search.backjump(len(cp.inputs) - 1)
        if search.budget_out:
            return done(UNKNOWN, reason=LABEL_BUDGET)
        if store.stats.taint_events:
            return done(UNKNOWN, reason=UNFOLD_BUDGET)
        return done(PROVED)
    except UnknownTerm as e:
        return done(ERROR, reason=f"unknown term orig({e.args[0]})")
    except BudgetExhausted:
        return done(UNKNOWN, reason=PROPAGATION_BUDGET)
    except WallClockExceeded:
        return done(UNKNOWN, reason=WALL_CLOCK)


def _check_one(args: tuple[ProgramAst, Formula | str, CheckConfig]) -> Verdict:
    ast, f, cfg = args
    try:
        return check_invariant(ast, f, cfg)
    except Exception as e:  # one bad entry must not sink the batch
        text = f if isinstance(f, str) else format_invariant(f)
        return Verdict(text, ERROR, reason=f"{type(e).__name__}: {e}")


def check_all(
    ast: ProgramAst,
    fs: Sequence[Formula | str],
    cfg: CheckConfig = CheckConfig(),
    jobs: int = 1,
) -> list[Verdict]:
    """Check each invariant on its own store; results keep the input order."""
    work = [(ast, f, cfg) for f in fs]
    if jobs <= 1 or len(work) <= 1:
        return [_check_one(w) for w in work]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_check_one, work))

"""Concrete big-step interpreter.

Arithmetic is over mathematical integers; any operation result, stored value
or return value outside the configured width is an overflow fault rather
than a wraparound.  ``/`` and ``%`` truncate toward zero.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Iterable, Sequence, TextIO, Union

from .domain import IntWidth, trunc_div, trunc_mod
from .frontend import Assign, Decl, If, Num, ProgramAst, Unary, Var
from .ssa import SAssign, SIf, SsaProgram, SVar

DEFAULT_STEP_BUDGET = 10**6

OVERFLOW = "overflow"
DIVISION_BY_ZERO = "division_by_zero"


@dataclass(frozen=True)
class Trace:
    entry: dict[str, int]
    exit_return: int
    steps: int

    def to_json(self) -> str:
        return json.dumps({"inputs": self.entry, "return": self.exit_return, "steps": self.steps})

    @classmethod
    def from_json(cls, line: str) -> "Trace":
        d = json.loads(line)
        return cls({k: int(v) for k, v in d["inputs"].items()}, int(d["return"]), int(d.get("steps", 0)))


@dataclass(frozen=True)
class Returned:
    value: int
    trace: Trace


@dataclass(frozen=True)
class Diverged:
    steps: int


@dataclass(frozen=True)
class Fault:
    kind: str  # OVERFLOW or DIVISION_BY_ZERO
    steps: int = 0


Outcome = Union[Returned, Diverged, Fault]


class _Fault(Exception):
    def __init__(self, kind: str):
        self.kind = kind


class _OutOfSteps(Exception):
    pass


class _Machine:
    def __init__(self, width: IntWidth, budget: int):
        self.lo = width.min_int
        self.hi = width.max_int
        self.budget = budget
        self.steps = 0

    def tick(self) -> None:
        self.steps += 1
        if self.steps > self.budget:
            raise _OutOfSteps

    def check(self, v: int) -> int:
        if v < self.lo or v > self.hi:
            raise _Fault(OVERFLOW)
        return v

    def eval(self, e, lookup: Callable[[object], int]):
        if isinstance(e, Num):
            return e.value
        if isinstance(e, (Var, SVar)):
            return lookup(e)
        if isinstance(e, Unary):
            x = self.eval(e.operand, lookup)
            return self.check(-x) if e.op == "-" else not x
        op = e.op
        if op == "&&":
            return bool(self.eval(e.left, lookup)) and bool(self.eval(e.right, lookup))
        if op == "||":
            return bool(self.eval(e.left, lookup)) or bool(self.eval(e.right, lookup))
        a = self.eval(e.left, lookup)
        b = self.eval(e.right, lookup)
        if op == "+":
            return self.check(a + b)
        if op == "-":
            return self.check(a - b)
        if op == "*":
            return self.check(a * b)
        if op in ("/", "%"):
            if b == 0:
                raise _Fault(DIVISION_BY_ZERO)
            return self.check(trunc_div(a, b) if op == "/" else trunc_mod(a, b))
        if op == "==":
            return a == b
        if op == "!=":
            return a != b
        if op == "<":
            return a < b
        if op == "<=":
            return a <= b
        if op == ">":
            return a > b
        return a >= b


def _check_inputs(params: Sequence, inputs: Sequence[int], width: IntWidth) -> None:
    if len(inputs) != len(params):
        raise ValueError(f"expected {len(params)} inputs, got {len(inputs)}")
    for v in inputs:
        if not width.contains(v):
            raise ValueError(f"input {v} outside {width.bits}-bit range")


def run(
    ast: ProgramAst,
    inputs: Sequence[int],
    width: IntWidth | int = 32,
    step_budget: int = DEFAULT_STEP_BUDGET,
) -> Outcome:
    width = width if isinstance(width, IntWidth) else IntWidth(width)
    _check_inputs(ast.params, inputs, width)
    m = _Machine(width, step_budget)
    env: dict[str, int] = dict(zip(ast.params, inputs))
    look = lambda v: env[v.name]

    def block(stmts) -> None:
        for s in stmts:
            m.tick()
            if isinstance(s, (Decl, Assign)):
                env[s.name] = m.check(m.eval(s.expr, look))
            elif isinstance(s, If):
                block(s.then if m.eval(s.cond, look) else s.orelse)
            else:
                while m.eval(s.cond, look):
                    block(s.body)
                    m.tick()

    try:
        block(ast.body)
        m.tick()
        ret = m.check(m.eval(ast.return_expr, look))
    except _Fault as f:
        return Fault(f.kind, m.steps)
    except _OutOfSteps:
        return Diverged(m.steps)
    return Returned(ret, Trace(dict(zip(ast.params, inputs)), ret, m.steps))


def run_ssa(
    ssa: SsaProgram,
    inputs: Sequence[int],
    width: IntWidth | int = 32,
    step_budget: int = DEFAULT_STEP_BUDGET,
) -> Outcome:
    """Evaluate the single-assignment form directly; phi nodes copy vectors."""
    width = width if isinstance(width, IntWidth) else IntWidth(width)
    _check_inputs(ssa.params, inputs, width)
    m = _Machine(width, step_budget)
    env = dict(zip(ssa.params, inputs))
    look = lambda v: env[v.var]

    def block(stmts) -> None:
        for s in stmts:
            m.tick()
            if isinstance(s, SAssign):
                env[s.target] = m.check(m.eval(s.expr, look))
            elif isinstance(s, SIf):
                if m.eval(s.cond, look):
                    block(s.then)
                    src = s.then_out
                else:
                    block(s.orelse)
                    src = s.else_out
                vals = [env[v] for v in src]
                env.update(zip(s.join, vals))
            else:
                env.update(zip(s.header, [env[v] for v in s.entry]))
                while m.eval(s.cond, look):
                    block(s.body)
                    m.tick()
                    env.update(zip(s.header, [env[v] for v in s.body_out]))

    try:
        block(ssa.body)
        m.tick()
        ret = m.check(m.eval(ssa.return_expr, look))
    except _Fault as f:
        return Fault(f.kind, m.steps)
    except _OutOfSteps:
        return Diverged(m.steps)
    return Returned(ret, Trace({p.base: v for p, v in zip(ssa.params, inputs)}, ret, m.steps))


@dataclass
class SuiteResult:
    traces: list[Trace] = field(default_factory=list)
    rejected: list[tuple[tuple[int, ...], Outcome]] = field(default_factory=list)


def run_suite(
    ast: ProgramAst,
    suite: Iterable[Sequence[int]],
    width: IntWidth | int = 32,
    step_budget: int = DEFAULT_STEP_BUDGET,
) -> SuiteResult:
    """Run every input vector; diverging or faulting runs are reported in `rejected`."""
    res = SuiteResult()
    for inputs in suite:
        out = run(ast, inputs, width, step_budget)
        if isinstance(out, Returned):
            res.traces.append(out.trace)
        else:
            res.rejected.append((tuple(inputs), out))
    return res


def write_traces(traces: Iterable[Trace], fh: TextIO) -> None:
    for t in traces:
        fh.write(t.to_json() + "\n")


def read_traces(fh: TextIO) -> list[Trace]:
    return [Trace.from_json(line) for line in fh if line.strip()]


def read_suite(text: str) -> list[tuple[int, ...]]:
    """One input vector per line, integers separated by whitespace or commas; ``#`` starts a comment."""
    out = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].replace(",", " ").strip()
        if line:
            out.append(tuple(int(x) for x in line.split()))
    return out


def graph(ast: ProgramAst, width: IntWidth | int, step_budget: int = DEFAULT_STEP_BUDGET) -> set[tuple[tuple[int, ...], int]]:
    """Input/output pairs of every terminating run over the full input space."""
    width = width if isinstance(width, IntWidth) else IntWidth(width)
    rng = range(width.min_int, width.max_int + 1)
    out = set()
    for inputs in product(rng, repeat=len(ast.params)):
        r = run(ast, inputs, width, step_budget)
        if isinstance(r, Returned):
            out.add((inputs, r.value))
    return out

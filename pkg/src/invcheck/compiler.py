"""Compile single-assignment programs into constraint networks.

Every SSA variable and every operator node gets its own finite-domain
variable, so an out-of-range intermediate fails exactly where the
interpreter would fault.  Literals are plain integers.  Conditions become
constraint trees; the right operand of ``&&`` / ``||`` only has its
arithmetic definitions posted once the left operand allows it to be
evaluated, mirroring short-circuit evaluation.
"""

from __future__ import annotations

import re
from collections import ChainMap
from dataclasses import dataclass, field
from typing import Iterator, Sequence, Union

from .combinators import Branch, post_ite, post_w
from .constraints import (
    COMPARE,
    And,
    Constraint,
    Div,
    FdVar,
    LinExpr,
    Mod,
    Term,
    Times,
    conj,
    disj,
    eq,
    negate,
    variables,
)
from .domain import IntWidth
from .frontend import Binary, Num, Unary
from .solver import Store
from .ssa import (
    SAssign,
    SExpr,
    SIf,
    SsaProgram,
    SsaVar,
    SStmt,
    SVar,
    SWhile,
    defined_vars,
    expr_vars,
    format_sexpr,
    used_vars,
)

RETURN_KEY = ("return", 0)
MAX_GRAPH_WIDTH = 6


class UnsupportedConstruct(Exception):
    pass


class WidthTooLarge(ValueError):
    pass


def default_unfold_budget(width: IntWidth | int) -> int:
    w = width if isinstance(width, IntWidth) else IntWidth(width)
    return 2 * w.max_int + 4


# -- items -----------------------------------------------------------------


@dataclass(frozen=True)
class Guarded:
    """Definitions that are only posted once `head` is entailed."""

    head: Constraint
    items: tuple


@dataclass(frozen=True)
class IteItem:
    cond: Constraint
    then_out: tuple[FdVar, ...]
    else_out: tuple[FdVar, ...]
    join: tuple[FdVar, ...]
    then_b: Branch
    else_b: Branch


@dataclass(frozen=True)
class WhileItem:
    node: SWhile
    env: ChainMap
    entry: tuple[FdVar, ...]
    first_out: tuple[FdVar, ...]
    header: tuple[FdVar, ...]
    depth: int


Item = Union[Constraint, Guarded, IteItem, WhileItem]


def fd_name(v: SsaVar) -> str:
    return f"{v.base[:1].upper()}{v.base[1:]}{v.version}"


class _Instantiator:
    def __init__(self, store: Store, unfold_budget: int):
        self.store = store
        self.unfold_budget = unfold_budget

    # expressions

    def define(self, v: SsaVar, env: ChainMap) -> FdVar:
        if v in env.maps[0]:
            return env.maps[0][v]
        fv = self.store.new_var(fd_name(v))
        env[v] = fv
        return fv

    def term(self, e: SExpr, env: ChainMap, items: list, target: FdVar | None = None) -> Term:
        """Compile an integer expression; the result lands in `target` when given."""
        if isinstance(e, (Num, SVar)):
            t = e.value if isinstance(e, Num) else env[e.var]
            if target is None:
                return t
            items.append(eq(target, t))
            return target
        if isinstance(e, Unary):
            if e.op != "-":
                raise UnsupportedConstruct(f"boolean operator {e.op!r} in integer context")
            a = self.term(e.operand, env, items)
            r = target if target is not None else self.store.new_var()
            items.append(eq(r, -1 * a if isinstance(a, int) else -a))
            return r
        if not isinstance(e, Binary) or e.op not in "+-*/%":
            raise UnsupportedConstruct(f"not an integer expression: {e!r}")
        a = self.term(e.left, env, items)
        b = self.term(e.right, env, items)
        r = target if target is not None else self.store.new_var()
        if e.op == "+":
            items.append(eq(r, _lin(a) + b))
        elif e.op == "-":
            items.append(eq(r, _lin(a) - b))
        elif e.op == "*":
            items.append(Times(r, a, b))
        elif e.op == "/":
            items.append(Div(r, a, b))
        else:
            items.append(Mod(r, a, b))
        return r

    def cond(self, e: SExpr, env: ChainMap, items: list) -> Constraint:
        if isinstance(e, Unary) and e.op == "!":
            return negate(self.cond(e.operand, env, items))
        if isinstance(e, Binary):
            if e.op in COMPARE:
                a = self.term(e.left, env, items)
                b = self.term(e.right, env, items)
                return COMPARE[e.op](a, b)
            if e.op in ("&&", "||"):
                left = self.cond(e.left, env, items)
                sub: list = []
                right = self.cond(e.right, env, sub)
                if e.op == "&&":
                    if sub:
                        items.append(Guarded(left, tuple(sub)))
                    return conj(left, right)
                if sub:
                    items.append(Guarded(negate(left), tuple(sub)))
                return disj(left, right)
        raise UnsupportedConstruct(f"not a condition: {e!r}")

    # statements

    def block(self, stmts: Sequence[SStmt], env: ChainMap, items: list) -> None:
        for s in stmts:
            if isinstance(s, SAssign):
                self.term(s.expr, env, items, self.define(s.target, env))
            elif isinstance(s, SIf):
                c = self.cond(s.cond, env, items)
                env_t, env_e = env.new_child(), env.new_child()
                then_b = self.branch(s.then, env_t)
                else_b = self.branch(s.orelse, env_e)
                join = tuple(self.define(v, env) for v in s.join)
                items.append(IteItem(c, tuple(env_t[v] for v in s.then_out), tuple(env_e[v] for v in s.else_out), join, then_b, else_b))
            elif isinstance(s, SWhile):
                entry = tuple(env[v] for v in s.entry)
                header = tuple(self.define(v, env) for v in s.header)
                first = tuple(self.store.new_var(fd_name(v)) for v in s.body_out)
                items.append(WhileItem(s, env, entry, first, header, self.unfold_budget))
            else:
                raise UnsupportedConstruct(f"unknown statement {s!r}")

    def branch(self, stmts: Sequence[SStmt], env: ChainMap) -> Branch:
        items: list = []
        self.block(stmts, env, items)
        return self.as_branch(items)

    def as_branch(self, items: list) -> Branch:
        items = tuple(items)
        plain = [c for c in items if isinstance(c, Constraint)]
        watch: set[FdVar] = set()
        for c in plain:
            watch |= variables(c)
        return Branch(conj(*plain) if plain else And(()), lambda s: self.post_items(s, items), frozenset(watch))

    def post_items(self, store: Store, items: Sequence[Item]) -> None:
        for it in items:
            if store.failed:
                return
            if isinstance(it, Constraint):
                store.post(it)
            elif isinstance(it, Guarded):
                store.post_guarded(it.head, lambda s, sub=it.items: self.post_items(s, sub))
            elif isinstance(it, IteItem):
                post_ite(store, it.cond, it.then_out, it.else_out, it.join, it.then_b, it.else_b)
            else:
                self.post_while(store, it)

    def post_while(self, store: Store, it: WhileItem) -> None:
        node, outer = it.node, it.env

        def cond_t(s: Store, vin: Sequence[FdVar]):
            env = outer.new_child(dict(zip(node.header, vin)))
            items: list = []
            c = self.cond(node.cond, env, items)
            return self.as_branch(items), c

        def body_t(s: Store, vin: Sequence[FdVar], vout: Sequence[FdVar]) -> Branch:
            env = outer.new_child(dict(zip(node.header, vin)))
            env.maps[0].update(zip(node.body_out, vout))
            return self.branch(node.body, env)

        free = {outer[v] for v in _free_vars(node) if v in outer}
        post_w(store, cond_t, it.entry, it.first_out, it.header, body_t, it.depth, watch=free)


def _lin(t: Term) -> LinExpr:
    return LinExpr.of(t)


def _free_vars(node: SWhile) -> set[SsaVar]:
    """Variables read by a loop but defined outside it."""
    inside = set(node.header) | set(defined_vars(node.body))
    used = set(expr_vars(node.cond)) | set(used_vars(node.body))
    return used - inside


# -- public API ------------------------------------------------------------


@dataclass
class CompiledProgram:
    store: Store
    inputs: tuple[FdVar, ...]
    output: FdVar
    var_index: dict[tuple[str, int], FdVar]
    ssa: SsaProgram
    param_names: tuple[str, ...] = field(default=())

    @property
    def width(self) -> IntWidth:
        return self.store.width


def compile_program(
    ssa: SsaProgram,
    width: IntWidth | int = 8,
    unfold_budget: int | None = None,
    store: Store | None = None,
) -> CompiledProgram:
    """Build the constraint network relating the inputs to the return value."""
    if store is None:
        store = Store(width)
    if unfold_budget is None:
        unfold_budget = default_unfold_budget(store.width)
    inst = _Instantiator(store, unfold_budget)
    env: ChainMap = ChainMap()
    inputs = tuple(inst.define(p, env) for p in ssa.params)
    items: list = []
    inst.block(ssa.body, env, items)
    ret = store.new_var("RET")
    inst.term(ssa.return_expr, env, items, ret)
    index = {(v.base, v.version): fv for v, fv in env.items()}
    index[RETURN_KEY] = ret
    inst.post_items(store, items)
    return CompiledProgram(store, inputs, ret, index, ssa, tuple(p.base for p in ssa.params))


def solution_graph(
    ssa: SsaProgram,
    width: IntWidth | int,
    unfold_budget: int | None = None,
) -> set[tuple[tuple[int, ...], int]]:
    """All (inputs, output) pairs found by exhaustive labeling; tainted branches are dropped."""
    w = width if isinstance(width, IntWidth) else IntWidth(width)
    if w.bits > MAX_GRAPH_WIDTH:
        raise WidthTooLarge(f"solution_graph supports widths up to {MAX_GRAPH_WIDTH}, got {w.bits}")
    cp = compile_program(ssa, w, unfold_budget)
    out = set()
    for sol in cp.store.search(list(cp.inputs) + [cp.output]):
        if cp.store.taints:
            continue
        out.add((tuple(sol[v] for v in cp.inputs), sol[cp.output]))
    return out


# -- textual dump ----------------------------------------------------------


def _vec(vs: Sequence[SsaVar]) -> str:
    return "[" + ", ".join(fd_name(v) for v in vs) + "]"


def _cap(text: str) -> str:
    # SSA names print as lower-case base + version; the network uses capitalized names
    return re.sub(r"\b([a-z_][A-Za-z0-9_]*?)(\d+)\b", lambda m: m.group(1)[:1].upper() + m.group(1)[1:] + m.group(2), text)


def _clp_expr(e: SExpr) -> str:
    return _cap(format_sexpr(e)).replace("==", "=")


def _clp_block(stmts: Sequence[SStmt], depth: int) -> Iterator[str]:
    pad = "    " * depth
    for s in stmts:
        if isinstance(s, SAssign):
            yield f"{pad}{fd_name(s.target)} = {_clp_expr(s.expr)}"
        elif isinstance(s, SIf):
            yield f"{pad}ite({_clp_expr(s.cond)}, {_vec(s.then_out)}, {_vec(s.else_out)}, {_vec(s.join)},"
            yield f"{pad}    ["
            yield from _join(_clp_block(s.then, depth + 2))
            yield f"{pad}    ],"
            yield f"{pad}    ["
            yield from _join(_clp_block(s.orelse, depth + 2))
            yield f"{pad}    ])"
        else:
            yield f"{pad}w({_clp_expr(s.cond)}, {_vec(s.entry)}, {_vec(s.body_out)}, {_vec(s.header)},"
            yield f"{pad}    ["
            yield from _join(_clp_block(s.body, depth + 2))
            yield f"{pad}    ])"


def _join(lines: Iterator[str]) -> Iterator[str]:
    # separate top-level entries of a list with commas
    lines = list(lines)
    starts = {i for i, ln in enumerate(lines) if _indent(ln) == _indent(lines[0])} if lines else set()
    for i, ln in enumerate(lines):
        yield ln + ("," if i + 1 in starts else "")


def _indent(line: str) -> int:
    return len(line) - len(line.lstrip(" "))


def emit_clp(ssa: SsaProgram) -> str:
    """Readable rendering of the network: straight-line constraints plus ite/w combinators."""
    head = f"{ssa.name}({_vec(ssa.params)}, [RET]) :-"
    body = list(_clp_block(ssa.body, 1))
    body.append(f"    RET = {_clp_expr(ssa.return_expr)}")
    return "\n".join([head] + list(_join(iter(body)))) + ".\n"

"""Syntax-directed single-assignment form.

Parameters and the first definition of each local get version 0; every
later definition of the same base name takes the next version.  A loop is
kept in header form: the header vector is defined once before the loop,
read by the condition and the body, and is also what code after the loop
sees.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Union

from .frontend import Assign, Binary, Decl, Expr, If, Num, ProgramAst, Unary, Var, While, format_expr


@dataclass(frozen=True, order=True)
class SsaVar:
    base: str
    version: int

    def __str__(self) -> str:
        return f"{self.base}{self.version}"


@dataclass(frozen=True)
class SVar:
    var: SsaVar


@dataclass(frozen=True)
class SAssign:
    target: SsaVar
    expr: "SExpr"


@dataclass(frozen=True)
class SIf:
    """Conditional with join ``join = phi(then_out, else_out)``."""

    cond: "SExpr"
    then: tuple["SStmt", ...]
    orelse: tuple["SStmt", ...]
    then_out: tuple[SsaVar, ...]
    else_out: tuple[SsaVar, ...]
    join: tuple[SsaVar, ...]


@dataclass(frozen=True)
class SWhile:
    """Loop ``header = phi(entry, body_out) while (cond) { body }``; header is also the exit."""

    entry: tuple[SsaVar, ...]
    body_out: tuple[SsaVar, ...]
    header: tuple[SsaVar, ...]
    cond: "SExpr"
    body: tuple["SStmt", ...]


SExpr = Union[Num, SVar, Unary, Binary]
SStmt = Union[SAssign, SIf, SWhile]


@dataclass(frozen=True)
class SsaProgram:
    name: str
    params: tuple[SsaVar, ...]
    body: tuple[SStmt, ...]
    return_expr: SExpr


class _Renamer:
    def __init__(self) -> None:
        self.next: dict[str, int] = {}
        self.order: dict[str, int] = {}

    def fresh(self, base: str) -> SsaVar:
        v = self.next.get(base, 0)
        self.next[base] = v + 1
        self.order.setdefault(base, len(self.order))
        return SsaVar(base, v)

    def expr(self, e: Expr, env: dict[str, SsaVar]) -> SExpr:
        if isinstance(e, Num):
            return Num(e.value)
        if isinstance(e, Var):
            return SVar(env[e.name])
        if isinstance(e, Unary):
            return Unary(e.op, self.expr(e.operand, env))
        return Binary(e.op, self.expr(e.left, env), self.expr(e.right, env))

    def carried(self, assigned: set[str], env: dict[str, SsaVar]) -> list[str]:
        return sorted((b for b in assigned if b in env), key=self.order.__getitem__)

    def block(self, stmts, env: dict[str, SsaVar]) -> tuple[SStmt, ...]:
        out: list[SStmt] = []
        for s in stmts:
            if isinstance(s, (Decl, Assign)):
                e = self.expr(s.expr, env)
                target = self.fresh(s.name)
                env[s.name] = target
                out.append(SAssign(target, e))
            elif isinstance(s, If):
                cond = self.expr(s.cond, env)
                env_t, env_e = dict(env), dict(env)
                then = self.block(s.then, env_t)
                orelse = self.block(s.orelse, env_e)
                names = self.carried(assigned_names(s.then) | assigned_names(s.orelse), env)
                t_out = tuple(env_t[b] for b in names)
                e_out = tuple(env_e[b] for b in names)
                join = tuple(self.fresh(b) for b in names)
                env.update(zip(names, join))
                out.append(SIf(cond, then, orelse, t_out, e_out, join))
            elif isinstance(s, While):
                names = self.carried(assigned_names(s.body), env)
                entry = tuple(env[b] for b in names)
                header = tuple(self.fresh(b) for b in names)
                env.update(zip(names, header))
                cond = self.expr(s.cond, env)
                env_b = dict(env)
                body = self.block(s.body, env_b)
                body_out = tuple(env_b[b] for b in names)
                out.append(SWhile(entry, body_out, header, cond, body))
            else:
                raise TypeError(f"unexpected statement {s!r}")
        return tuple(out)


def assigned_names(stmts) -> set[str]:
    """Base names assigned or declared anywhere in `stmts`."""
    out: set[str] = set()
    for s in stmts:
        if isinstance(s, (Decl, Assign)):
            out.add(s.name)
        elif isinstance(s, If):
            out |= assigned_names(s.then) | assigned_names(s.orelse)
        elif isinstance(s, While):
            out |= assigned_names(s.body)
    return out


def to_ssa(ast: ProgramAst) -> SsaProgram:
    r = _Renamer()
    env = {p: r.fresh(p) for p in ast.params}
    params = tuple(env[p] for p in ast.params)
    body = r.block(ast.body, env)
    return SsaProgram(ast.name, params, body, r.expr(ast.return_expr, env))


# -- traversal helpers -----------------------------------------------------


def expr_vars(e: SExpr) -> Iterator[SsaVar]:
    if isinstance(e, SVar):
        yield e.var
    elif isinstance(e, Unary):
        yield from expr_vars(e.operand)
    elif isinstance(e, Binary):
        yield from expr_vars(e.left)
        yield from expr_vars(e.right)


def defined_vars(stmts: tuple[SStmt, ...]) -> Iterator[SsaVar]:
    """Every SSA variable with a defining occurrence in `stmts`, in program order."""
    for s in stmts:
        if isinstance(s, SAssign):
            yield s.target
        elif isinstance(s, SIf):
            yield from defined_vars(s.then)
            yield from defined_vars(s.orelse)
            yield from s.join
        else:
            yield from s.header
            yield from defined_vars(s.body)


def used_vars(stmts: tuple[SStmt, ...]) -> Iterator[SsaVar]:
    for s in stmts:
        if isinstance(s, SAssign):
            yield from expr_vars(s.expr)
        elif isinstance(s, SIf):
            yield from expr_vars(s.cond)
            yield from used_vars(s.then)
            yield from used_vars(s.orelse)
            yield from s.then_out
            yield from s.else_out
        else:
            yield from s.entry
            yield from s.body_out
            yield from expr_vars(s.cond)
            yield from used_vars(s.body)


# -- printing --------------------------------------------------------------


def _rename_for_print(e: SExpr) -> Expr:
    if isinstance(e, SVar):
        return Var(str(e.var))
    if isinstance(e, Unary):
        return Unary(e.op, _rename_for_print(e.operand))
    if isinstance(e, Binary):
        return Binary(e.op, _rename_for_print(e.left), _rename_for_print(e.right))
    return e


def format_sexpr(e: SExpr) -> str:
    return format_expr(_rename_for_print(e))


def _lines(stmts: tuple[SStmt, ...], depth: int) -> Iterator[str]:
    pad = "    " * depth
    for s in stmts:
        if isinstance(s, SAssign):
            yield f"{pad}{s.target} = {format_sexpr(s.expr)}"
        elif isinstance(s, SIf):
            yield f"{pad}if ({format_sexpr(s.cond)}) {{"
            yield from _lines(s.then, depth + 1)
            yield f"{pad}}} else {{"
            yield from _lines(s.orelse, depth + 1)
            yield f"{pad}}}"
            for j, a, b in zip(s.join, s.then_out, s.else_out):
                yield f"{pad}{j} = phi({a}, {b})"
        else:
            for h, a, b in zip(s.header, s.entry, s.body_out):
                yield f"{pad}{h} = phi({a}, {b})"
            yield f"{pad}while ({format_sexpr(s.cond)}) {{"
            yield from _lines(s.body, depth + 1)
            yield f"{pad}}}"


def pretty_print_ssa(ssa: SsaProgram) -> str:
    params = ", ".join(str(p) for p in ssa.params)
    out = [f"{ssa.name}({params}) {{"]
    out.extend(_lines(ssa.body, 1))
    out.append(f"    return {format_sexpr(ssa.return_expr)}")
    out.append("}")
    return "\n".join(out) + "\n"

"""Hypothesis strategies for small well-formed programs."""

from __future__ import annotations

from hypothesis import strategies as st

from invcheck.frontend import Assign, Binary, Decl, If, Num, ProgramAst, Unary, Var, While

PARAMS = ("a", "b")
LOCALS = ("x", "y")


def int_expr(names, depth=2):
    leaf = st.one_of(st.integers(0, 3).map(Num), st.sampled_from(names).map(Var))
    if depth == 0:
        return leaf
    sub = int_expr(names, depth - 1)
    return st.one_of(
        leaf,
        leaf,
        st.builds(Binary, st.sampled_from(("+", "-", "*", "/", "%")), sub, sub),
        st.builds(Unary, st.just("-"), sub),
    )


def bool_expr(names, depth=1):
    atom = st.builds(
        Binary, st.sampled_from(("==", "!=", "<", "<=", ">", ">=")), int_expr(names, 1), int_expr(names, 1)
    )
    if depth == 0:
        return atom
    sub = bool_expr(names, depth - 1)
    return st.one_of(atom, atom, st.builds(Binary, st.sampled_from(("&&", "||")), sub, sub), st.builds(Unary, st.just("!"), sub))


@st.composite
def block(draw, names, depth, counters, loops=True):
    """Statements assigning only to `names`; loops get a fresh bounded counter."""
    kinds = ("assign", "assign", "if", "while") if loops else ("assign", "assign", "if")
    out = []
    for _ in range(draw(st.integers(0 if depth else 1, 3))):
        kind = draw(st.sampled_from(kinds if depth < 2 else ("assign",)))
        if kind == "assign":
            out.append(Assign(draw(st.sampled_from(names)), draw(int_expr(names))))
        elif kind == "if":
            then = tuple(draw(block(names, depth + 1, counters, loops)))
            orelse = tuple(draw(block(names, depth + 1, counters, loops))) if draw(st.booleans()) else ()
            out.append(If(draw(bool_expr(names)), then, orelse))
        else:
            k = f"k{len(counters)}"
            counters.append(k)
            bound = draw(st.integers(1, 3))
            body = tuple(draw(block(names, depth + 1, counters, loops))) + (Assign(k, Binary("+", Var(k), Num(1))),)
            cond = Binary("&&", Binary("<", Var(k), Num(bound)), draw(bool_expr(names, 0)))
            out.extend([Decl(k, Num(0)), While(cond, body)])
    return out


@st.composite
def programs(draw, loops=True):
    names = PARAMS + LOCALS
    decls = [Decl(n, draw(int_expr(PARAMS, 1))) for n in LOCALS]
    counters: list[str] = []
    body = draw(block(names, 0, counters, loops))
    ret = draw(int_expr(names, 1))
    return ProgramAst("f", PARAMS, tuple(decls + body), ret)

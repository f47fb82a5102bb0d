"""Constraint terms and trees posted to a :class:`~invcheck.solver.Store`.

Leaves are linear relations ``sum(c_i * x_i) + k  op  0`` with ``op`` one of
``==``, ``!=``, ``<=``, plus the non-linear definitions ``x = y * z``,
``x = y / z`` and ``x = y % z``. Trees combine leaves with :class:`And` and
:class:`Or`; negation is pushed to the leaves by :func:`negate`, so a tree is
always in negation normal form.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Union

from .domain import trunc_div, trunc_mod


@dataclass(frozen=True)
class FdVar:
    id: int
    name: str = ""

    def __repr__(self) -> str:
        return self.name or f"_{self.id}"

    def __add__(self, other):
        return LinExpr.of(self) + other

    __radd__ = __add__

    def __sub__(self, other):
        return LinExpr.of(self) - other

    def __rsub__(self, other):
        return LinExpr.of(other) - self

    def __mul__(self, k: int):
        return LinExpr.of(self) * k

    __rmul__ = __mul__

    def __neg__(self):
        return LinExpr.of(self) * -1


Term = Union[FdVar, int]


@dataclass(frozen=True)
class LinExpr:
    coefs: tuple[tuple[int, FdVar], ...] = ()
    const: int = 0

    @staticmethod
    def of(x: "FdVar | int | LinExpr") -> "LinExpr":
        if isinstance(x, LinExpr):
            return x
        if isinstance(x, FdVar):
            return LinExpr(((1, x),))
        return LinExpr((), int(x))

    def __add__(self, other) -> "LinExpr":
        o = LinExpr.of(other)
        return LinExpr(_merge(self.coefs + o.coefs), self.const + o.const)

    __radd__ = __add__

    def __sub__(self, other) -> "LinExpr":
        return self + LinExpr.of(other) * -1

    def __rsub__(self, other) -> "LinExpr":
        return LinExpr.of(other) - self

    def __mul__(self, k: int) -> "LinExpr":
        return LinExpr(_merge((c * k, v) for c, v in self.coefs), self.const * k)

    __rmul__ = __mul__

    def __neg__(self) -> "LinExpr":
        return self * -1


def _merge(pairs: Iterable[tuple[int, FdVar]]) -> tuple[tuple[int, FdVar], ...]:
    acc: dict[FdVar, int] = {}
    for c, v in pairs:
        acc[v] = acc.get(v, 0) + c
    return tuple(sorted(((c, v) for v, c in acc.items() if c), key=lambda cv: cv[1].id))


class Constraint:
    __slots__ = ()


@dataclass(frozen=True)
class Lin(Constraint):
    """``sum(coef * var) + const  op  0`` with op in ``==``, ``!=``, ``<=``."""

    coefs: tuple[tuple[int, FdVar], ...]
    const: int
    op: str

    def __str__(self) -> str:
        left = [(c, v) for c, v in self.coefs if c > 0]
        right = [(-c, v) for c, v in self.coefs if c < 0]
        sym = {"==": "=", "!=": "≠", "<=": "≤"}[self.op]
        return f"{_fmt_sum(left, 0)} {sym} {_fmt_sum(right, -self.const)}"


def _fmt_sum(terms: list[tuple[int, FdVar]], const: int) -> str:
    parts = [(repr(v) if c == 1 else f"{c}*{v!r}") for c, v in terms]
    if not parts:
        return str(const)
    s = " + ".join(parts)
    if const > 0:
        s += f" + {const}"
    elif const < 0:
        s += f" - {-const}"
    return s


@dataclass(frozen=True)
class Times(Constraint):
    x: Term
    y: Term
    z: Term

    def __str__(self) -> str:
        return f"{self.x!r} = {self.y!r} * {self.z!r}"


@dataclass(frozen=True)
class Div(Constraint):
    x: Term
    y: Term
    z: Term

    def __str__(self) -> str:
        return f"{self.x!r} = {self.y!r} / {self.z!r}"


@dataclass(frozen=True)
class Mod(Constraint):
    x: Term
    y: Term
    z: Term

    def __str__(self) -> str:
        return f"{self.x!r} = {self.y!r} mod {self.z!r}"


@dataclass(frozen=True)
class And(Constraint):
    items: tuple[Constraint, ...] = ()

    def __str__(self) -> str:
        return "true" if not self.items else " ∧ ".join(_paren(c) for c in self.items)


@dataclass(frozen=True)
class Or(Constraint):
    items: tuple[Constraint, ...] = ()

    def __str__(self) -> str:
        return "false" if not self.items else " ∨ ".join(_paren(c) for c in self.items)


def _paren(c: Constraint) -> str:
    return f"({c})" if isinstance(c, (And, Or)) and len(c.items) > 1 else str(c)


TRUE = And(())
FALSE = Or(())

ArithDef = (Times, Div, Mod)


def _rel(a, b, op: str, const: int = 0) -> Lin:
    e = LinExpr.of(a) - LinExpr.of(b)
    return Lin(e.coefs, e.const + const, op)


def eq(a, b) -> Lin:
    return _rel(a, b, "==")


def ne(a, b) -> Lin:
    return _rel(a, b, "!=")


def le(a, b) -> Lin:
    return _rel(a, b, "<=")


def lt(a, b) -> Lin:
    return _rel(a, b, "<=", 1)


def ge(a, b) -> Lin:
    return _rel(b, a, "<=")


def gt(a, b) -> Lin:
    return _rel(b, a, "<=", 1)


COMPARE = {"==": eq, "!=": ne, "<": lt, "<=": le, ">": gt, ">=": ge}


def conj(*cs: Constraint) -> Constraint:
    items: list[Constraint] = []
    for c in cs:
        if isinstance(c, And):
            items.extend(c.items)
        elif c == FALSE:
            return FALSE
        else:
            items.append(c)
    return items[0] if len(items) == 1 else And(tuple(items))


def disj(*cs: Constraint) -> Constraint:
    items: list[Constraint] = []
    for c in cs:
        if isinstance(c, Or):
            items.extend(c.items)
        elif c == TRUE:
            return TRUE
        else:
            items.append(c)
    return items[0] if len(items) == 1 else Or(tuple(items))


def vector_eq(xs, ys) -> Constraint:
    if len(xs) != len(ys):
        raise ValueError("vectors differ in length")
    return conj(*(eq(x, y) for x, y in zip(xs, ys)))


def negate(c: Constraint) -> Constraint:
    if isinstance(c, Lin):
        if c.op == "==":
            return Lin(c.coefs, c.const, "!=")
        if c.op == "!=":
            return Lin(c.coefs, c.const, "==")
        # not (e <= 0)  <=>  -e + 1 <= 0
        return Lin(tuple((-k, v) for k, v in c.coefs), 1 - c.const, "<=")
    if isinstance(c, And):
        return disj(*(negate(x) for x in c.items))
    if isinstance(c, Or):
        return conj(*(negate(x) for x in c.items))
    raise ValueError(f"cannot negate arithmetic definition {c}")


def variables(c: Constraint) -> set[FdVar]:
    if isinstance(c, Lin):
        return {v for _, v in c.coefs}
    if isinstance(c, (And, Or)):
        out: set[FdVar] = set()
        for x in c.items:
            out |= variables(x)
        return out
    return {t for t in (c.x, c.y, c.z) if isinstance(t, FdVar)}


def holds(c: Constraint, val: Mapping[FdVar, int]) -> bool:
    """Evaluate `c` under a total valuation of its variables."""

    def t(x: Term) -> int:
        return val[x] if isinstance(x, FdVar) else x

    if isinstance(c, Lin):
        s = sum(k * val[v] for k, v in c.coefs) + c.const
        return s == 0 if c.op == "==" else s != 0 if c.op == "!=" else s <= 0
    if isinstance(c, And):
        return all(holds(x, val) for x in c.items)
    if isinstance(c, Or):
        return any(holds(x, val) for x in c.items)
    y, z = t(c.y), t(c.z)
    if isinstance(c, Times):
        return t(c.x) == y * z
    if z == 0:
        return False
    return t(c.x) == (trunc_div(y, z) if isinstance(c, Div) else trunc_mod(y, z))

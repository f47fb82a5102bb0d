"""Invariant formulas over entry values and the return value.

Text syntax, one formula per line::

    formula := implication
    implication := disjunction [ "==>" implication ]      (right-associative)
    disjunction := conjunction { "||" conjunction }
    conjunction := unary { "&&" unary }
    unary := "!" unary | "(" formula ")" | term cmp term
    term := "orig" "(" IDENT ")" | "return" | [ "-" ] INT
    cmp := "==" | "!=" | "<" | "<=" | ">" | ">="
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping, Union


class InvariantSyntaxError(ValueError):
    pass


class UnknownTerm(KeyError):
    pass


@dataclass(frozen=True)
class Orig:
    name: str

    def __str__(self) -> str:
        return f"orig({self.name})"


@dataclass(frozen=True)
class Ret:
    def __str__(self) -> str:
        return "return"


@dataclass(frozen=True)
class Lit:
    value: int

    def __str__(self) -> str:
        return str(self.value)


InvTerm = Union[Orig, Ret, Lit]


@dataclass(frozen=True)
class Cmp:
    op: str
    left: InvTerm
    right: InvTerm


@dataclass(frozen=True)
class Not:
    operand: "Formula"


@dataclass(frozen=True)
class BoolOp:
    op: str  # "&&" or "||"
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


Formula = Union[Cmp, Not, BoolOp, Implies]

CMP_OPS = ("==", "!=", "<", "<=", ">", ">=")
_PREC = {"||": 2, "&&": 3}

_TOKEN = re.compile(r"\s*(==>|==|!=|<=|>=|&&|\|\||[<>!()\-]|orig\b|return\b|[A-Za-z_][A-Za-z0-9_]*|\d+)")


def _tokens(text: str) -> list[str]:
    out, pos = [], 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise InvariantSyntaxError(f"unexpected character at {pos + 1}: {text[pos:]!r}")
        out.append(m.group(1))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokens(text)
        self.i = 0

    def peek(self) -> str | None:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, want: str | None = None) -> str:
        t = self.peek()
        if t is None or (want is not None and t != want):
            raise InvariantSyntaxError(f"expected {want or 'more input'}, got {t or 'end of input'}")
        self.i += 1
        return t

    def formula(self) -> Formula:
        left = self.disjunction()
        if self.peek() == "==>":
            self.i += 1
            return Implies(left, self.formula())
        return left

    def disjunction(self) -> Formula:
        f = self.conjunction()
        while self.peek() == "||":
            self.i += 1
            f = BoolOp("||", f, self.conjunction())
        return f

    def conjunction(self) -> Formula:
        f = self.unary()
        while self.peek() == "&&":
            self.i += 1
            f = BoolOp("&&", f, self.unary())
        return f

    def unary(self) -> Formula:
        t = self.peek()
        if t == "!":
            self.i += 1
            return Not(self.unary())
        if t == "(":
            self.i += 1
            f = self.formula()
            self.take(")")
            return f
        left = self.term()
        op = self.take()
        if op not in CMP_OPS:
            raise InvariantSyntaxError(f"expected comparison operator, got {op}")
        return Cmp(op, left, self.term())

    def term(self) -> InvTerm:
        t = self.take()
        if t == "orig":
            self.take("(")
            name = self.take()
            if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", name):
                raise InvariantSyntaxError(f"expected parameter name, got {name}")
            self.take(")")
            return Orig(name)
        if t == "return":
            return Ret()
        neg = t == "-"
        if neg:
            t = self.take()
        if not t.isdigit():
            raise InvariantSyntaxError(f"expected term, got {t}")
        return Lit(-int(t) if neg else int(t))


def parse_invariant(text: str) -> Formula:
    p = _Parser(text)
    f = p.formula()
    if p.peek() is not None:
        raise InvariantSyntaxError(f"trailing input starting at {p.peek()!r}")
    return f


def parse_invariants(text: str) -> list[str]:
    """Non-blank, non-comment lines of an invariants file."""
    return [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]


def _prec(f: Formula) -> int:
    if isinstance(f, Implies):
        return 1
    if isinstance(f, BoolOp):
        return _PREC[f.op]
    return 4


def format_invariant(f: Formula) -> str:
    if isinstance(f, Cmp):
        return f"{f.left} {f.op} {f.right}"
    if isinstance(f, Not):
        inner = format_invariant(f.operand)
        return f"!{inner}" if isinstance(f.operand, Not) else f"!({inner})"
    if isinstance(f, Implies):
        left = format_invariant(f.left)
        if isinstance(f.left, Implies):
            left = f"({left})"
        return f"{left} ==> {format_invariant(f.right)}"
    p = _prec(f)
    parts = []
    for sub, is_right in ((f.left, False), (f.right, True)):
        s = format_invariant(sub)
        sp = _prec(sub)
        # operators are left-associative, so a same-level right operand needs parentheses
        parts.append(f"({s})" if sp < p or (is_right and sp == p) else s)
    return f" {f.op} ".join(parts)


def term_value(t: InvTerm, entry: Mapping[str, int], ret: int) -> int:
    if isinstance(t, Lit):
        return t.value
    if isinstance(t, Ret):
        return ret
    if t.name not in entry:
        raise UnknownTerm(t.name)
    return entry[t.name]


def holds_on(f: Formula, entry: Mapping[str, int], ret: int) -> bool:
    if isinstance(f, Cmp):
        a, b = term_value(f.left, entry, ret), term_value(f.right, entry, ret)
        return {
            "==": a == b,
            "!=": a != b,
            "<": a < b,
            "<=": a <= b,
            ">": a > b,
            ">=": a >= b,
        }[f.op]
    if isinstance(f, Not):
        return not holds_on(f.operand, entry, ret)
    if isinstance(f, Implies):
        return not holds_on(f.left, entry, ret) or holds_on(f.right, entry, ret)
    if f.op == "&&":
        return holds_on(f.left, entry, ret) and holds_on(f.right, entry, ret)
    return holds_on(f.left, entry, ret) or holds_on(f.right, entry, ret)


def terms_of(f: Formula) -> set[InvTerm]:
    if isinstance(f, Cmp):
        return {f.left, f.right}
    if isinstance(f, Not):
        return terms_of(f.operand)
    return terms_of(f.left) | terms_of(f.right)

"""Lexer, parser, checker and pretty-printer for the mini-language.

Grammar::

    program := "int" IDENT "(" [ "int" IDENT { "," "int" IDENT } ] ")" block
    block   := "{" { stmt } "}"
    stmt    := "int" IDENT "=" expr ";" | IDENT "=" expr ";"
             | IDENT "++" ";" | IDENT "--" ";"
             | "if" "(" expr ")" block [ "else" block ]
             | "while" "(" expr ")" block
             | "return" expr ";"

Expressions use C precedence: ``||`` < ``&&`` < ``== !=`` < ``< <= > >=``
< ``+ -`` < ``* / %`` < unary ``- !``.  Comments run from ``//`` to end of
line.  ``v++`` and ``v--`` are desugared to ``v = v + 1`` / ``v = v - 1``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator, Union


class FrontendError(Exception):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        super().__init__(f"{line}:{col}: {message}")
        self.message = message
        self.line = line
        self.col = col


class LangSyntaxError(FrontendError):
    def __init__(self, message: str, line: int = 0, col: int = 0, expected: tuple[str, ...] = ()):
        if expected:
            message = f"{message}; expected {' or '.join(expected)}"
        super().__init__(message, line, col)
        self.expected = expected


class UndeclaredNameError(FrontendError):
    pass


class RedeclaredNameError(FrontendError):
    pass


class LangTypeError(FrontendError):
    pass


class StructureError(FrontendError):
    pass


# -- AST -------------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: int
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Var:
    name: str
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Unary:
    op: str  # "-" or "!"
    operand: "Expr"
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Binary:
    op: str
    left: "Expr"
    right: "Expr"
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


Expr = Union[Num, Var, Unary, Binary]


@dataclass(frozen=True)
class Decl:
    name: str
    expr: Expr
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Assign:
    name: str
    expr: Expr
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class If:
    cond: Expr
    then: tuple["Stmt", ...]
    orelse: tuple["Stmt", ...] = ()
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class While:
    cond: Expr
    body: tuple["Stmt", ...]
    line: int = field(default=0, compare=False)


Stmt = Union[Decl, Assign, If, While]


@dataclass(frozen=True)
class ProgramAst:
    name: str
    params: tuple[str, ...]
    body: tuple[Stmt, ...]
    return_expr: Expr


ARITH_OPS = ("+", "-", "*", "/", "%")
COMPARE_OPS = ("==", "!=", "<", "<=", ">", ">=")
BOOL_OPS = ("&&", "||")

_PREC = {"||": 1, "&&": 2, "==": 3, "!=": 3, "<": 4, "<=": 4, ">": 4, ">=": 4, "+": 5, "-": 5, "*": 6, "/": 6, "%": 6}
_KEYWORDS = {"int", "if", "else", "while", "return"}

# -- lexer -----------------------------------------------------------------


@dataclass(frozen=True)
class Token:
    kind: str  # "ident", "num", "kw", "op", "eof"
    text: str
    line: int
    col: int


_TOKEN_RE = re.compile(
    r"(?P<ws>[ \t\r\n]+|//[^\n]*)"
    r"|(?P<num>[0-9]+)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>\+\+|--|==|!=|<=|>=|&&|\|\||[-+*/%<>=!(){};,])"
)


def tokenize(source: str) -> list[Token]:
    out: list[Token] = []
    pos, line, line_start = 0, 1, 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        col = pos - line_start + 1
        if m is None:
            raise LangSyntaxError(f"unexpected character {source[pos]!r}", line, col)
        kind = m.lastgroup
        text = m.group()
        if kind == "ws":
            nl = text.count("\n")
            if nl:
                line += nl
                line_start = pos + text.rindex("\n") + 1
        elif kind == "ident" and text in _KEYWORDS:
            out.append(Token("kw", text, line, col))
        else:
            out.append(Token(kind, text, line, col))
        pos = m.end()
    out.append(Token("eof", "", line, pos - line_start + 1))
    return out


# -- parser ----------------------------------------------------------------


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.toks = tokens
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def _describe(self, t: Token) -> str:
        return "end of input" if t.kind == "eof" else repr(t.text)

    def error(self, *expected: str) -> LangSyntaxError:
        t = self.tok
        return LangSyntaxError(f"unexpected {self._describe(t)}", t.line, t.col, expected)

    def at(self, text: str) -> bool:
        t = self.tok
        return t.kind in ("op", "kw") and t.text == text

    def expect(self, text: str) -> Token:
        if not self.at(text):
            raise self.error(repr(text))
        t = self.tok
        self.i += 1
        return t

    def ident(self) -> Token:
        t = self.tok
        if t.kind != "ident":
            raise self.error("identifier")
        self.i += 1
        return t

    def program(self) -> tuple[str, list[Token], list]:
        self.expect("int")
        name = self.ident().text
        self.expect("(")
        params: list[Token] = []
        if not self.at(")"):
            self.expect("int")
            params.append(self.ident())
            while self.at(","):
                self.i += 1
                self.expect("int")
                params.append(self.ident())
        self.expect(")")
        body = self.block()
        if self.tok.kind != "eof":
            raise self.error("end of input")
        return name, params, body

    def block(self) -> list:
        self.expect("{")
        stmts = []
        while not self.at("}"):
            if self.tok.kind == "eof":
                raise self.error("'}'")
            stmts.append(self.stmt())
        self.i += 1
        return stmts

    def stmt(self):
        t = self.tok
        if self.at("int"):
            self.i += 1
            name = self.ident()
            self.expect("=")
            e = self.expr()
            self.expect(";")
            return ("decl", name, e)
        if self.at("if"):
            self.i += 1
            self.expect("(")
            c = self.expr()
            self.expect(")")
            then = self.block()
            orelse = []
            if self.at("else"):
                self.i += 1
                orelse = self.block()
            return ("if", t, c, then, orelse)
        if self.at("while"):
            self.i += 1
            self.expect("(")
            c = self.expr()
            self.expect(")")
            return ("while", t, c, self.block())
        if self.at("return"):
            self.i += 1
            e = self.expr()
            self.expect(";")
            return ("return", t, e)
        if t.kind == "ident":
            self.i += 1
            if self.at("++") or self.at("--"):
                op = self.tok.text[0]
                self.i += 1
                self.expect(";")
                return ("assign", t, Binary(op, Var(t.text, t.line, t.col), Num(1, t.line, t.col), t.line, t.col))
            if self.at("="):
                self.i += 1
                e = self.expr()
                self.expect(";")
                return ("assign", t, e)
            raise self.error("'='", "'++'", "'--'")
        raise self.error("statement")

    def expr(self, min_prec: int = 1) -> Expr:
        left = self.unary()
        while True:
            t = self.tok
            prec = _PREC.get(t.text) if t.kind == "op" else None
            if prec is None or prec < min_prec:
                return left
            self.i += 1
            right = self.expr(prec + 1)
            left = Binary(t.text, left, right, t.line, t.col)

    def unary(self) -> Expr:
        t = self.tok
        if self.at("-") or self.at("!"):
            self.i += 1
            return Unary(t.text, self.unary(), t.line, t.col)
        if self.at("("):
            self.i += 1
            e = self.expr()
            self.expect(")")
            return e
        if t.kind == "num":
            self.i += 1
            return Num(int(t.text), t.line, t.col)
        if t.kind == "ident":
            self.i += 1
            return Var(t.text, t.line, t.col)
        raise self.error("expression")


# -- checking --------------------------------------------------------------


class _Checker:
    def __init__(self) -> None:
        self.declared: set[str] = set()

    def declare(self, tok: Token, scope: set[str]) -> None:
        if tok.text in self.declared:
            raise RedeclaredNameError(f"{tok.text!r} is already declared", tok.line, tok.col)
        self.declared.add(tok.text)
        scope.add(tok.text)

    def expr_type(self, e: Expr, scope: set[str]) -> str:
        if isinstance(e, Num):
            return "int"
        if isinstance(e, Var):
            if e.name not in scope:
                raise UndeclaredNameError(f"undeclared variable {e.name!r}", e.line, e.col)
            return "int"
        if isinstance(e, Unary):
            want = "int" if e.op == "-" else "bool"
            self.require(e.operand, want, scope, f"operand of {e.op!r}")
            return want
        if e.op in ARITH_OPS:
            self.require(e.left, "int", scope, f"operand of {e.op!r}")
            self.require(e.right, "int", scope, f"operand of {e.op!r}")
            return "int"
        if e.op in COMPARE_OPS:
            self.require(e.left, "int", scope, f"operand of {e.op!r}")
            self.require(e.right, "int", scope, f"operand of {e.op!r}")
            return "bool"
        self.require(e.left, "bool", scope, f"operand of {e.op!r}")
        self.require(e.right, "bool", scope, f"operand of {e.op!r}")
        return "bool"

    def require(self, e: Expr, want: str, scope: set[str], what: str) -> None:
        got = self.expr_type(e, scope)
        if got != want:
            raise LangTypeError(f"{what} must be {want}, got {got}", getattr(e, "line", 0), getattr(e, "col", 0))

    def block(self, raw: list, scope: set[str], top: bool) -> tuple[tuple[Stmt, ...], Expr | None]:
        scope = set(scope)
        out: list[Stmt] = []
        ret = None
        for k, s in enumerate(raw):
            kind = s[0]
            if kind == "return":
                if not top or k != len(raw) - 1:
                    raise StructureError("return must be the last statement of the function body", s[1].line, s[1].col)
                self.require(s[2], "int", scope, "return value")
                ret = s[2]
            elif kind == "decl":
                _, tok, e = s
                self.require(e, "int", scope, "initializer")
                self.declare(tok, scope)
                out.append(Decl(tok.text, e, tok.line))
            elif kind == "assign":
                _, tok, e = s
                if tok.text not in scope:
                    raise UndeclaredNameError(f"undeclared variable {tok.text!r}", tok.line, tok.col)
                self.require(e, "int", scope, "assigned value")
                out.append(Assign(tok.text, e, tok.line))
            elif kind == "if":
                _, tok, c, then, orelse = s
                self.require(c, "bool", scope, "if condition")
                t_body, _ = self.block(then, scope, False)
                e_body, _ = self.block(orelse, scope, False)
                out.append(If(c, t_body, e_body, tok.line))
            else:
                _, tok, c, body = s
                self.require(c, "bool", scope, "while condition")
                b, _ = self.block(body, scope, False)
                out.append(While(c, b, tok.line))
        return tuple(out), ret


def parse_program(source: str) -> ProgramAst:
    """Parse and validate a whole function; raises a :class:`FrontendError` subclass."""
    p = _Parser(tokenize(source))
    name, params, body = p.program()
    chk = _Checker()
    scope: set[str] = set()
    for t in params:
        chk.declare(t, scope)
    stmts, ret = chk.block(body, scope, True)
    if ret is None:
        end = p.toks[-1]
        raise StructureError("function body must end with a return statement", end.line, end.col)
    return ProgramAst(name, tuple(t.text for t in params), stmts, ret)


def parse_expr(source: str) -> Expr:
    """Parse a lone expression (no name or type checks)."""
    p = _Parser(tokenize(source))
    e = p.expr()
    if p.tok.kind != "eof":
        raise p.error("end of input")
    return e


# -- printing --------------------------------------------------------------


def format_expr(e: Expr, min_prec: int = 0) -> str:
    if isinstance(e, Num):
        return str(e.value)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Unary):
        return f"{e.op}{_format_unary_operand(e.operand)}"
    prec = _PREC[e.op]
    s = f"{format_expr(e.left, prec)} {e.op} {format_expr(e.right, prec + 1)}"
    return f"({s})" if prec < min_prec else s


def _format_unary_operand(e: Expr) -> str:
    return format_expr(e) if isinstance(e, (Num, Var)) else f"({format_expr(e)})"


def _lines(stmts: tuple[Stmt, ...], depth: int) -> Iterator[str]:
    pad = "    " * depth
    for s in stmts:
        if isinstance(s, Decl):
            yield f"{pad}int {s.name} = {format_expr(s.expr)};"
        elif isinstance(s, Assign):
            yield f"{pad}{s.name} = {format_expr(s.expr)};"
        elif isinstance(s, If):
            yield f"{pad}if ({format_expr(s.cond)}) {{"
            yield from _lines(s.then, depth + 1)
            if s.orelse:
                yield f"{pad}}} else {{"
                yield from _lines(s.orelse, depth + 1)
            yield f"{pad}}}"
        else:
            yield f"{pad}while ({format_expr(s.cond)}) {{"
            yield from _lines(s.body, depth + 1)
            yield f"{pad}}}"


def pretty_print(ast: ProgramAst) -> str:
    params = ", ".join(f"int {p}" for p in ast.params)
    out = [f"int {ast.name}({params}) {{"]
    out.extend(_lines(ast.body, 1))
    out.append(f"    return {format_expr(ast.return_expr)};")
    out.append("}")
    return "\n".join(out) + "\n"

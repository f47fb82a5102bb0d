from __future__ import annotations

import pytest
from hypothesis import given, settings

from invcheck.frontend import (
    Assign,
    Binary,
    If,
    LangSyntaxError,
    LangTypeError,
    Num,
    RedeclaredNameError,
    StructureError,
    UndeclaredNameError,
    Var,
    While,
    parse_expr,
    parse_program,
    pretty_print,
    tokenize,
)
from strategies import programs


def test_foo_shape(foo):
    assert foo.name == "foo"
    assert foo.params == ("n", "r")
    loops = [s for s in foo.body if isinstance(s, While)]
    assert len(loops) == 1
    ifs = [s for s in loops[0].body if isinstance(s, If)]
    assert len(ifs) == 1 and ifs[0].orelse
    assert foo.return_expr == Var("r")


def test_identity_has_empty_body(ident):
    assert ident.body == ()
    assert ident.return_expr == Var("x")


def test_increment_desugars():
    ast = parse_program("int f(int x) { x++; x--; return x; }")
    assert ast.body == (Assign("x", Binary("+", Var("x"), Num(1))), Assign("x", Binary("-", Var("x"), Num(1))))


def test_precedence_and_associativity():
    assert parse_expr("1 - 2 - 3") == Binary("-", Binary("-", Num(1), Num(2)), Num(3))
    assert parse_expr("1 + 2 * 3") == Binary("+", Num(1), Binary("*", Num(2), Num(3)))
    e = parse_expr("a < b || c == d && !(e > f)")
    assert e.op == "||" and e.right.op == "&&"


def test_comments_ignored():
    ast = parse_program("// header\nint f(int x) { // trailing\n return x; }\n")
    assert ast.return_expr == Var("x")


@pytest.mark.parametrize(
    "src,err",
    [
        ("int f(int x){ return y; }", UndeclaredNameError),
        ("int f(int x){ y = 1; return x; }", UndeclaredNameError),
        ("int f(int x){ int x = 1; return x; }", RedeclaredNameError),
        ("int f(int x){ if (x) { x = 1; } return x; }", LangTypeError),
        ("int f(int x){ x = x > 1; return x; }", LangTypeError),
        ("int f(int x){ return x < 1; }", LangTypeError),
        ("int f(int x){ x = 1; }", StructureError),
        ("int f(int x){ return x; x = 1; }", StructureError),
        ("int f(int x){ if (x > 0) { return x; } return x; }", StructureError),
        ("int f(int x){ return x }", LangSyntaxError),
        ("int f(int x){ x = (1 + ; return x; }", LangSyntaxError),
        ("int f(int x) { return x; } extra", LangSyntaxError),
        ("int f(int x) { x = 1 @ 2; return x; }", LangSyntaxError),
    ],
)
def test_rejections(src, err):
    with pytest.raises(err) as info:
        parse_program(src)
    assert info.value.line >= 1


def test_syntax_error_position_and_expected():
    with pytest.raises(LangSyntaxError) as info:
        parse_program("int f(int x) {\n  return x\n}")
    assert (info.value.line, info.value.col) == (3, 1)
    assert "';'" in info.value.expected


def test_block_scoping():
    src = "int f(int x) { if (x > 0) { int t = 1; x = t; } return x; }"
    assert parse_program(src).return_expr == Var("x")
    with pytest.raises(UndeclaredNameError):
        parse_program("int f(int x) { if (x > 0) { int t = 1; } return t; }")


def test_tokenize_positions():
    toks = tokenize("int f()\n{ return 1; }")
    ret = next(t for t in toks if t.text == "return")
    assert (ret.line, ret.col) == (2, 3)


def test_corpus_pretty_print_round_trip(foo):
    assert parse_program(pretty_print(foo)) == foo


@settings(max_examples=150, deadline=None)
@given(programs())
def test_round_trip(ast):
    assert parse_program(pretty_print(ast)) == ast

from __future__ import annotations

import pytest

from invcheck.invariants import (
    BoolOp,
    Cmp,
    Implies,
    InvariantSyntaxError,
    Lit,
    Not,
    Orig,
    Ret,
    UnknownTerm,
    format_invariant,
    holds_on,
    parse_invariant,
    parse_invariants,
)


def test_parse_implication():
    f = parse_invariant("orig(r) == 0 ==> return == 0")
    assert f == Implies(Cmp("==", Orig("r"), Lit(0)), Cmp("==", Ret(), Lit(0)))


def test_implication_right_associative():
    f = parse_invariant("return > 0 ==> return > 1 ==> return > 2")
    assert isinstance(f.right, Implies)


def test_connective_precedence():
    f = parse_invariant("return == 1 || return == 2 && orig(x) < -3")
    assert f.op == "||" and f.right.op == "&&"
    assert f.right.right == Cmp("<", Orig("x"), Lit(-3))


@pytest.mark.parametrize(
    "text",
    [
        "orig(r) == 0 ==> return == 0",
        "return >= orig(r)",
        "!(return == 0)",
        "(return > 0 ==> return > 1) ==> return > 2",
        "return == 1 || (return == 2 || orig(n) != -5)",
        "(return == 1 || return == 2) && orig(n) <= 3",
    ],
)
def test_format_round_trip(text):
    f = parse_invariant(text)
    assert format_invariant(f) == text
    assert parse_invariant(format_invariant(f)) == f


@pytest.mark.parametrize("text", ["", "return", "return == ", "orig(1) == 0", "return == 0 extra", "return = 0", "(return == 0"])
def test_syntax_errors(text):
    with pytest.raises(InvariantSyntaxError):
        parse_invariant(text)


def test_holds_on():
    inv1 = parse_invariant("orig(r) == 0 ==> return == 0")
    assert not holds_on(inv1, {"n": 1, "r": 0}, 1)
    assert holds_on(inv1, {"n": 1, "r": 5}, 1)  # vacuous
    assert holds_on(parse_invariant("return >= orig(r)"), {"n": 5, "r": 3}, 4)
    assert holds_on(Not(BoolOp("&&", Cmp("<", Ret(), Lit(0)), Cmp(">", Ret(), Lit(0)))), {}, 0)


def test_unknown_parameter():
    with pytest.raises(UnknownTerm):
        holds_on(parse_invariant("orig(z) == 0"), {"n": 1}, 0)


def test_invariants_file_skips_comments():
    assert parse_invariants("# header\n\nreturn >= 0\n  # more\norig(n) == 1\n") == ["return >= 0", "orig(n) == 1"]

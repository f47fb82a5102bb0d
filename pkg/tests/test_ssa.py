from __future__ import annotations

from collections import Counter

from hypothesis import given, settings

from invcheck.frontend import parse_program
from invcheck.interpreter import Returned, run, run_ssa
from invcheck.ssa import SIf, SsaVar, SWhile, defined_vars, pretty_print_ssa, to_ssa, used_vars
from strategies import programs


def ssa_of(src):
    return to_ssa(parse_program(src))


def test_renaming_snippet():
    text = pretty_print_ssa(ssa_of("int f(int i, int j) { i = 5; j = 2; i = i + 1; j = j * i; return j; }"))
    assert "i2 = i1 + 1" in text
    assert "j2 = j1 * i2" in text


def test_straight_line_has_no_phi():
    ssa = ssa_of("int f(int x) { x = 1; x = 2; return x; }")
    assert [str(s.target) for s in ssa.body] == ["x1", "x2"]
    assert "phi" not in pretty_print_ssa(ssa)


def test_identity():
    assert "return x0" in pretty_print_ssa(ssa_of("int id(int x) { return x; }"))


def test_foo_structure(foo):
    ssa = to_ssa(foo)
    assert ssa.params == (SsaVar("n", 0), SsaVar("r", 0))
    loop = next(s for s in ssa.body if isinstance(s, SWhile))
    assert {v.base for v in loop.header} == {"n", "r", "s"}
    assert [str(v) for v in loop.entry] == ["n0", "r0", "s0"]
    inner = next(s for s in loop.body if isinstance(s, SIf))
    assert {v.base for v in inner.join} == {"r", "s"}
    text = pretty_print_ssa(ssa)
    assert text.count("phi") == 5  # three loop-carried, two at the join
    assert "return r1" in text


def _check_single_assignment(ssa):
    defs = Counter(defined_vars(ssa.body))
    defs.update(ssa.params)
    assert all(n == 1 for n in defs.values())
    assert set(used_vars(ssa.body)) <= set(defs)


@settings(max_examples=150, deadline=None)
@given(programs())
def test_single_assignment(ast):
    _check_single_assignment(to_ssa(ast))


@settings(max_examples=150, deadline=None)
@given(programs())
def test_semantics_preserved(ast):
    ssa = to_ssa(ast)
    for inputs in [(0, 0), (1, -2), (5, 3), (-7, 7)]:
        a, b = run(ast, inputs, 4, 2000), run_ssa(ssa, inputs, 4, 2000)
        assert type(a) is type(b)
        if isinstance(a, Returned):
            assert a.value == b.value
        else:
            assert getattr(a, "kind", None) == getattr(b, "kind", None)

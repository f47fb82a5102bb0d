from __future__ import annotations

from pathlib import Path

import pytest
from hypothesis import given, settings

from invcheck.compiler import RETURN_KEY, WidthTooLarge, compile_program, default_unfold_budget, emit_clp, solution_graph
from invcheck.constraints import eq
from invcheck.domain import Domain
from invcheck.frontend import parse_program
from invcheck.interpreter import graph
from invcheck.solver import Status
from invcheck.ssa import to_ssa
from conftest import load
from strategies import programs

GOLDEN = Path(__file__).parent / "golden"


def test_foo_forward_execution(foo):
    cp = compile_program(to_ssa(foo), 8)
    n0, r0 = cp.inputs
    cp.store.post(eq(n0, 5))
    cp.store.post(eq(r0, 3))
    assert cp.store.propagate() is Status.FIXPOINT
    assert cp.store.dom(cp.output) == Domain.singleton(4)
    assert cp.store.stats.label_nodes == 0


def test_identity_network(ident):
    cp = compile_program(to_ssa(ident), 8)
    cp.store.post(eq(cp.inputs[0], -17))
    cp.store.propagate()
    assert cp.store.value(cp.output) == -17
    assert cp.var_index[RETURN_KEY] is cp.output


def test_foo_clp_golden(foo):
    assert emit_clp(to_ssa(foo)) == (GOLDEN / "foo.clp").read_text()


def test_default_unfold_budget():
    assert default_unfold_budget(8) == 2 * 127 + 4


def test_identity_solution_graph_width_two(ident):
    assert solution_graph(to_ssa(ident), 2) == {((-2,), -2), ((-1,), -1), ((0,), 0), ((1,), 1)}


def test_diverging_inputs_absent(tmp_path):
    spin = load("spin")
    g = solution_graph(to_ssa(spin), 3)
    assert g == graph(spin, 3, 2000)
    assert all(x <= 0 for (x,), _ in g)


def test_overflow_paths_absent():
    ast = parse_program("int f(int x) { x = x * 2; return x; }")
    assert solution_graph(to_ssa(ast), 3) == {((x,), 2 * x) for x in range(-2, 2)}


def test_graph_width_limit(foo):
    with pytest.raises(WidthTooLarge):
        solution_graph(to_ssa(foo), 8)


@pytest.mark.parametrize("name", ["foo", "classify", "two_loops", "gcd", "absdiff", "divmod", "tri", "mulguard"])
def test_corpus_graph_width_three(name):
    ast = load(name)
    assert solution_graph(to_ssa(ast), 3) == graph(ast, 3, 5000)


@settings(max_examples=60, deadline=None)
@given(programs())
def test_random_programs_graph_width_three(ast):
    assert solution_graph(to_ssa(ast), 3) == graph(ast, 3, 5000)

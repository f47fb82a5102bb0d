from __future__ import annotations

from itertools import product

from hypothesis import given, settings
from hypothesis import strategies as st

from invcheck.constraints import COMPARE, Div, LinExpr, Mod, Times, conj, disj, holds, negate
from invcheck.domain import Domain
from invcheck.solver import DISENTAILED, ENTAILED, Status, Store

BITS = 4
LO, HI = -8, 7
NVARS = 3


def lin_expr(vs):
    term = st.tuples(st.integers(-3, 3), st.sampled_from(vs))
    return st.builds(
        lambda ts, k: sum((LinExpr.of(v) * a for a, v in ts), LinExpr.of(k)),
        st.lists(term, min_size=1, max_size=3),
        st.integers(-6, 6),
    )


def comparison(vs, depth):
    atom = st.one_of(
        st.builds(lambda op, a, b: COMPARE[op](a, b), st.sampled_from(sorted(COMPARE)), lin_expr(vs), st.integers(-6, 6)),
        st.builds(lambda op, a, b: COMPARE[op](a, b), st.sampled_from(sorted(COMPARE)), st.sampled_from(vs), st.sampled_from(vs)),
    )
    if depth == 0:
        return atom
    sub = comparison(vs, depth - 1)
    return st.one_of(atom, st.builds(conj, sub, sub), st.builds(disj, sub, sub), sub.map(negate))


def constraint(vs):
    """A comparison tree, optionally conjoined with one arithmetic definition (those are never negated)."""
    arith = st.builds(lambda k, x, y, z: k(x, y, z), st.sampled_from((Times, Div, Mod)), *(st.sampled_from(vs),) * 3)
    tree = comparison(vs, 2)
    return st.one_of(tree, st.builds(conj, tree, arith))


def fresh():
    s = Store(BITS)
    return s, [s.new_var(f"V{i}") for i in range(NVARS)]


def solutions(c, vs):
    out = set()
    for vals in product(range(LO, HI + 1), repeat=len(vs)):
        try:
            ok = holds(c, dict(zip(vs, vals)))
        except ZeroDivisionError:
            ok = False
        if ok:
            out.add(vals)
    return out


_, VARS = fresh()  # ids 0..NVARS-1 are identical in every fresh store
CONSTRAINTS = constraint(VARS)


@settings(max_examples=200, deadline=None)
@given(CONSTRAINTS)
def test_propagation_keeps_every_solution(c):
    s, vs = fresh()
    s.post(c)
    status = s.propagate()
    sols = solutions(c, vs)
    if status is Status.FAILED:
        assert not sols
    for sol in sols:
        assert all(x in s.dom(v) for x, v in zip(sol, vs))


@settings(max_examples=200, deadline=None)
@given(CONSTRAINTS, CONSTRAINTS)
def test_entailment_is_conservative(c1, c2):
    s, vs = fresh()
    s.post(c1)
    if s.propagate() is Status.FAILED:
        return
    e = s.entailment(c2)
    if e is ENTAILED or e is DISENTAILED:
        want = e is ENTAILED
        for sol in solutions(c1, vs):
            try:
                got = holds(c2, dict(zip(vs, sol)))
            except ZeroDivisionError:
                got = False
            assert got == want


@settings(max_examples=150, deadline=None)
@given(CONSTRAINTS, CONSTRAINTS)
def test_constructive_disjunction_sound(c1, c2):
    s, vs = fresh()
    s.post_constructive_disjunction(c1, c2)
    status = s.propagate()
    sols = solutions(c1, vs) | solutions(c2, vs)
    if status is Status.FAILED:
        assert not sols
    for sol in sols:
        assert all(x in s.dom(v) for x, v in zip(sol, vs))


@settings(max_examples=150, deadline=None)
@given(CONSTRAINTS)
def test_labeling_matches_brute_force(c):
    s, vs = fresh()
    s.post(c)
    found = {tuple(sol[v] for v in vs) for sol in s.search(vs)}
    assert found == solutions(c, vs)
    assert s.label(vs).status == ("solution" if found else "exhausted")


@settings(max_examples=150, deadline=None)
@given(CONSTRAINTS, CONSTRAINTS, CONSTRAINTS)
def test_snapshot_restore_exact(c0, c1, c2):
    s, vs = fresh()
    s.post(c0)
    s.propagate()
    before = s.state()
    outer = s.snapshot()
    s.post(c1)
    s.propagate()
    middle = s.state()
    inner = s.snapshot()
    s.new_var("extra")
    s.post(c2)
    s.post_constructive_disjunction(c1, c2)
    s.propagate()
    s.restore(inner)
    assert s.state() == middle
    s.restore(outer)
    assert s.state() == before


intervals = st.lists(st.tuples(st.integers(-20, 20), st.integers(0, 6)).map(lambda t: (t[0], t[0] + t[1])), max_size=6)


def canonical(d: Domain) -> bool:
    iv = d.intervals
    return all(lo <= hi for lo, hi in iv) and all(b[0] - a[1] >= 2 for a, b in zip(iv, iv[1:]))


@given(intervals, intervals, st.integers(-20, 20))
def test_domain_operations_canonical(a, b, x):
    da, db = Domain.from_intervals(a), Domain.from_intervals(b)
    values_a = {v for lo, hi in a for v in range(lo, hi + 1)}
    values_b = {v for lo, hi in b for v in range(lo, hi + 1)}
    assert set(da) == values_a
    for d, want in [
        (da.intersect(db), values_a & values_b),
        (da.union(db), values_a | values_b),
        (da.remove(x), values_a - {x}),
        (da.clip(-5, x), {v for v in values_a if -5 <= v <= x}),
        (da.negate(), {-v for v in values_a}),
    ]:
        assert canonical(d)
        assert set(d) == want

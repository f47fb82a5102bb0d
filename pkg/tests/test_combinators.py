from __future__ import annotations

import pytest

from invcheck.combinators import EMPTY_BRANCH, Branch, check_body_contradiction, post_ite, post_w
from invcheck.constraints import conj, eq, ge, gt, le, lt
from invcheck.domain import Domain
from invcheck.solver import Status, Store


def assign(target, expr):
    c = eq(target, expr)
    return Branch(view=c, post=lambda s: s.post(c), watch=frozenset({target}))


def ranged(store, name, lo, hi):
    v = store.new_var(name)
    store.post(ge(v, lo))
    store.post(le(v, hi))
    return v


def test_ite_entailed_condition_posts_then_branch():
    s = Store(8)
    s0, r0 = s.new_var("S0"), s.new_var("R0")
    then_v = [s.new_var("S1"), s.new_var("R1")]
    else_v = [s.new_var("S2"), s.new_var("R2")]
    join = [s.new_var("S3"), s.new_var("R3")]
    s.post(eq(s0, 0))
    then_b = Branch(
        view=conj(eq(then_v[0], 1), eq(then_v[1], r0 + 1)),
        post=lambda st: st.post(conj(eq(then_v[0], 1), eq(then_v[1], r0 + 1))),
    )
    else_b = Branch(
        view=conj(eq(else_v[0], 0), eq(else_v[1], r0 - 1)),
        post=lambda st: st.post(conj(eq(else_v[0], 0), eq(else_v[1], r0 - 1))),
    )
    post_ite(s, eq(s0, 0), then_v, else_v, join, then_b, else_b)
    assert s.propagate() is Status.FIXPOINT
    assert s.dom(join[0]) == Domain.singleton(1)
    assert s.dom(then_v[0]) == Domain.singleton(1)
    s.post(eq(r0, 4))
    s.propagate()
    assert s.value(join[1]) == 5
    assert s.dom(else_v[0]) == s.width.full()  # else branch never posted


def test_ite_unknown_condition_joins_both_branches():
    s = Store(8)
    c = s.new_var("C")
    x0, x1, x2 = s.new_var("X0"), s.new_var("X1"), s.new_var("X2")
    post_ite(s, gt(c, 0), [x0], [x1], [x2], assign(x0, 1), assign(x1, 3))
    s.propagate()
    assert s.dom(x2) == Domain.of([1, 3])
    assert s.dom(c) == s.width.full()


def test_ite_join_excluding_then_values_selects_else():
    s = Store(8)
    c = ranged(s, "C", -5, 5)
    x0, x1, x2 = s.new_var("X0"), s.new_var("X1"), s.new_var("X2")
    post_ite(s, gt(c, 0), [x0], [x1], [x2], assign(x0, 1), assign(x1, 2))
    s.post(ge(x2, 2))
    s.propagate()
    survivors = {cv for cv in range(-5, 6) if (1 if cv > 0 else 2) >= 2}
    assert set(s.dom(c)) == survivors
    assert s.dom(x2) == Domain.singleton(2)


def countdown(store, depth, x0=None):
    """while (x > 0) x = x - 1, over a one-variable vector."""
    xs = [x0 or store.new_var("X0"), store.new_var("X1"), store.new_var("X2")]

    def cond_t(st, vin):
        return EMPTY_BRANCH, gt(vin[0], 0)

    def body_t(st, vin, vout):
        return assign(vout[0], vin[0] - 1)

    post_w(store, cond_t, [xs[0]], [xs[1]], [xs[2]], body_t, depth)
    return xs


def test_w_skips_when_condition_disentailed():
    s = Store(8)
    x0 = ranged(s, "X0", -5, 0)
    _, _, x2 = countdown(s, 10, x0)
    s.propagate()
    s.post(eq(x0, -3))
    s.propagate()
    assert s.value(x2) == -3
    assert s.stats.unfoldings == 0


def test_w_unfolds_on_demand():
    s = Store(8)
    x0, _, x2 = countdown(s, 10)
    s.post(eq(x0, 3))
    s.propagate()
    assert s.value(x2) == 0
    assert s.stats.unfoldings == 3
    assert s.stats.taint_events == 0


def test_w_enters_when_exit_equality_disentailed():
    s = Store(8)
    x0, x1, x2 = countdown(s, 10)
    s.post(lt(x2, x0))
    s.propagate()
    assert s.dom(x0).min == 1  # loop must run at least once
    assert s.stats.unfoldings == 1
    s.post(eq(x0, 5))
    s.propagate()
    assert (s.value(x1), s.value(x2)) == (4, 0)


def test_w_depth_exhaustion_taints():
    s = Store(8)
    x0, _, x2 = countdown(s, 2)
    s.post(eq(x0, 3))
    s.propagate()
    assert s.stats.unfoldings == 2
    assert s.taints == 1
    assert not s.is_fixed(x2)


def test_w_body_contradiction_posts_skip():
    # while (x > 0) y = y + 1; with y = MAX_INT the body overflows, so the loop is skipped
    s = Store(8)
    x0 = ranged(s, "X0", -5, 5)
    y0 = s.new_var("Y0")
    s.post(eq(y0, 127))
    x1, y1, x2, y2 = (s.new_var(n) for n in ("X1", "Y1", "X2", "Y2"))

    def cond_t(st, vin):
        return EMPTY_BRANCH, gt(vin[0], 0)

    def body_t(st, vin, vout):
        c = conj(eq(vout[0], vin[0]), eq(vout[1], vin[1] + 1))
        return Branch(view=c, post=lambda t: t.post(c))

    post_w(s, cond_t, [x0, y0], [x1, y1], [x2, y2], body_t, 10)
    assert s.propagate() is Status.FIXPOINT
    assert s.dom(x0) == Domain.range(-5, 0)
    assert s.value(y2) == 127
    assert s.stats.unfoldings == 0


def test_body_contradiction_guard_inert_when_body_satisfiable():
    s = Store(8)
    x = ranged(s, "X", 0, 9)
    fired = []
    check_body_contradiction(s, lambda st: st.post(gt(x, 3)), lambda st: fired.append(1), [x])
    s.propagate()
    assert fired == []
    assert s.dom(x) == Domain.range(0, 9)


def test_mismatched_vectors_rejected():
    s = Store(8)
    a, b = s.new_var(), s.new_var()
    with pytest.raises(ValueError):
        post_ite(s, gt(a, 0), [a], [a, b], [b], EMPTY_BRANCH, EMPTY_BRANCH)

"""Control-flow combinators built from guarded constraints.

``post_ite`` relates the two branch results of a conditional to its join
vector; ``post_w`` relates a loop's entry vector to its exit vector and
unfolds one iteration at a time, only when the store proves that the loop
body must run.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .constraints import TRUE, Constraint, FdVar, conj, negate, variables, vector_eq
from .solver import ENTAILED, UNKNOWN, Ent, Group, Poster, Store, ent_not


@dataclass(frozen=True)
class Branch:
    """An instantiated statement block.

    `view` holds the block's plain constraints and is what entailment tests
    look at; `post` posts the whole block, nested combinators included.
    """

    view: Constraint = TRUE
    post: Poster = lambda s: None
    watch: frozenset[FdVar] = field(default_factory=frozenset)


EMPTY_BRANCH = Branch()

# (store, loop-entry vector) -> (definitions used by the condition, condition)
CondTemplate = Callable[[Store, Sequence[FdVar]], "tuple[Branch, Constraint]"]
# (store, iteration-entry vector, iteration-exit vector) -> instantiated body
BodyTemplate = Callable[[Store, Sequence[FdVar], Sequence[FdVar]], Branch]


def _check_lengths(*vs: Sequence[FdVar]) -> None:
    if len({len(v) for v in vs}) > 1:
        raise ValueError("combinator vectors must have equal length")


def post_ite(
    store: Store,
    cond: Constraint,
    v0: Sequence[FdVar],
    v1: Sequence[FdVar],
    v2: Sequence[FdVar],
    then_b: Branch,
    else_b: Branch,
    watch: Iterable[FdVar] = (),
) -> None:
    """Join vector `v2` equals `v0` after the then-branch and `v1` after the else-branch."""
    _check_lengths(v0, v1, v2)
    ncond = negate(cond)
    eq_then = vector_eq(v2, v0)
    eq_else = vector_eq(v2, v1)
    view_then = conj(cond, then_b.view, eq_then)
    view_else = conj(ncond, else_b.view, eq_else)

    def then_tail(s: Store) -> None:
        then_b.post(s)
        s.post(eq_then)

    def else_tail(s: Store) -> None:
        else_b.post(s)
        s.post(eq_else)

    def then_full(s: Store) -> None:
        s.post(cond)
        then_tail(s)

    def else_full(s: Store) -> None:
        s.post(ncond)
        else_tail(s)

    extra = set(watch)
    w_cond = variables(cond) | extra
    w_all = variables(view_then) | variables(view_else) | then_b.watch | else_b.watch | extra
    g = Group()
    store.add_guard(lambda s: s.entailment(cond), then_tail, w_cond, g)
    store.add_guard(lambda s: ent_not(s.entailment(cond)), else_tail, w_cond, g)
    store.add_guard(lambda s: ent_not(s.entailment(view_then)), else_full, w_all, g)
    store.add_guard(lambda s: ent_not(s.entailment(view_else)), then_full, w_all, g)
    store.post_constructive_disjunction(then_full, else_full, w_all, g)


def check_body_contradiction(
    store: Store,
    cond_and_body: Poster,
    skip: Poster,
    watch: Iterable[FdVar],
    group: Group | None = None,
) -> None:
    """Post `skip` once speculatively posting `cond_and_body` is shown to fail."""

    def test(s: Store) -> Ent:
        if s.speculating:
            return UNKNOWN
        return ENTAILED if s.speculate(cond_and_body) is None else UNKNOWN

    store.add_guard(test, skip, watch, group)


def post_w(
    store: Store,
    cond_t: CondTemplate,
    v0: Sequence[FdVar],
    v1: Sequence[FdVar],
    v2: Sequence[FdVar],
    body_t: BodyTemplate,
    depth_left: int,
    watch: Iterable[FdVar] = (),
    level: int = 0,
) -> None:
    """Loop from entry vector `v0` to exit vector `v2`; `v1` receives the first iteration's result.

    The next level is materialized only when the loop is known to be
    entered.  With no depth left, a taint is recorded instead.  While the
    store is speculating, entering posts the condition and body but not the
    next level; dropping constraints keeps speculation sound.
    """
    _check_lengths(v0, v1, v2)
    if depth_left < 0:
        raise ValueError("depth_left must be non-negative")
    watch = tuple(watch)
    cond_defs, cond = cond_t(store, v0)
    cond_defs.post(store)
    ncond = negate(cond)
    eq_skip = vector_eq(v2, v0)

    def enter(s: Store, relaxed: bool = False) -> None:
        s.post(cond)
        body_t(s, v0, v1).post(s)
        if relaxed or s.speculating:
            return
        if depth_left == 0:
            s.add_taint()
            return
        s.stats.unfoldings += 1
        v3 = [s.new_var(_next_name(v, level + 1)) for v in v1]
        post_w(s, cond_t, v1, v3, v2, body_t, depth_left - 1, watch, level + 1)

    def skip(s: Store) -> None:
        s.post(ncond)
        s.post(eq_skip)

    w_cond = variables(cond) | set(watch)
    w_all = w_cond | set(v0) | set(v2) | cond_defs.watch
    exit_view = conj(ncond, eq_skip)
    g = Group()
    store.add_guard(lambda s: s.entailment(cond), lambda s: enter(s), w_cond, g)
    store.add_guard(lambda s: ent_not(s.entailment(cond)), lambda s: s.post(eq_skip), w_cond, g)
    store.add_guard(lambda s: ent_not(s.entailment(exit_view)), lambda s: enter(s), w_all, g)
    check_body_contradiction(store, lambda s: enter(s, True), skip, w_all, g)


def _next_name(v: FdVar, level: int) -> str:
    base = v.name.split("@")[0] if v.name else "v"
    return f"{base}@{level}"

"""Finite-domain constraint store.

A :class:`Store` owns variables with interval-union domains, an agenda of
propagators, and a heap of suspended items (guarded constraints,
disjunctions, constructive disjunctions) that are re-examined, in
registration order, once the propagators are at fixpoint.  Every mutation
goes through a trail, so :meth:`Store.snapshot` / :meth:`Store.restore` give
exact, stack-disciplined backtracking.
"""

from __future__ import annotations

import enum
import heapq
import time
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor
from typing import Callable, Iterable, Iterator

from .constraints import (
    And,
    Constraint,
    Div,
    FdVar,
    Lin,
    Mod,
    Or,
    Term,
    Times,
    eq,
    variables,
)
from .domain import Domain, IntWidth, trunc_div, trunc_mod

DEFAULT_PROPAGATION_BUDGET = 10**7
SPFA_LIMIT = 200_000
# per-run round cap for the non-linear propagators; past it they requeue themselves
_MAX_ROUNDS = 64


class Ent(enum.Enum):
    ENTAILED = "entailed"
    DISENTAILED = "disentailed"
    UNKNOWN = "unknown"


ENTAILED, DISENTAILED, UNKNOWN = Ent.ENTAILED, Ent.DISENTAILED, Ent.UNKNOWN


def ent_not(e: Ent) -> Ent:
    if e is ENTAILED:
        return DISENTAILED
    if e is DISENTAILED:
        return ENTAILED
    return UNKNOWN


class Status(enum.Enum):
    FIXPOINT = "fixpoint"
    FAILED = "failed"


class SolverError(Exception):
    pass


class BudgetExhausted(SolverError):
    """The propagation-step budget ran out."""


class WallClockExceeded(SolverError):
    """The store's deadline passed."""


class TokenOrderViolation(SolverError):
    """A snapshot token was restored or released out of LIFO order."""


class _Fail(Exception):
    pass


@dataclass
class Stats:
    propagations: int = 0
    unfoldings: int = 0
    taint_events: int = 0
    label_nodes: int = 0
    speculations: int = 0


@dataclass
class _Token:
    trail_len: int
    nvars: int
    queue: list
    gheap: list
    failed: bool


Poster = Callable[["Store"], None]


class Store:
    def __init__(
        self,
        width: IntWidth | int = 8,
        *,
        propagation_budget: int = DEFAULT_PROPAGATION_BUDGET,
        deadline: float | None = None,
    ):
        self.width = width if isinstance(width, IntWidth) else IntWidth(width)
        self.propagation_budget = propagation_budget
        self.deadline = deadline
        self.stats = Stats()
        self.speculating = 0
        self.taints = 0
        self.budget_exhausted = False
        self._full = self.width.full()
        self._dom: list[Domain] = []
        self._vars: list[FdVar] = []
        self._watch: list[list] = []
        self._edges: dict[int, list[tuple[int, int]]] = {}
        self._trail: list = []
        self._queue: deque = deque()
        self._gheap: list = []
        self._failed = False
        self._tokens: list[_Token] = []
        self._seq = 0
        self._running = None

    # -- variables --------------------------------------------------------

    @property
    def min_int(self) -> int:
        return self.width.min_int

    @property
    def max_int(self) -> int:
        return self.width.max_int

    def new_var(self, name: str = "") -> FdVar:
        v = FdVar(len(self._dom), name)
        self._dom.append(self._full)
        self._vars.append(v)
        self._watch.append([])
        self._trail.append((-1, self._pop_var))
        return v

    def _pop_var(self) -> None:
        self._dom.pop()
        self._vars.pop()
        self._watch.pop()

    def dom(self, t: Term) -> Domain:
        if isinstance(t, FdVar):
            return self._dom[t.id]
        return Domain.singleton(t)

    def value(self, t: Term) -> int:
        return self.dom(t).value

    def is_fixed(self, t: Term) -> bool:
        return not isinstance(t, FdVar) or self._dom[t.id].is_singleton()

    @property
    def failed(self) -> bool:
        return self._failed

    @property
    def num_vars(self) -> int:
        return len(self._dom)

    # -- trail ------------------------------------------------------------

    def _undo(self, fn: Callable[[], None]) -> None:
        self._trail.append((-1, fn))

    def _narrow(self, t: Term, new: Domain) -> bool:
        if not isinstance(t, FdVar):
            if t not in new:
                raise _Fail
            return False
        vid = t.id
        old = self._dom[vid]
        if new is old or new.intervals == old.intervals:
            return False
        if not new.intervals:
            raise _Fail
        self._trail.append((vid, old))
        self._dom[vid] = new
        for item in self._watch[vid]:
            if item.active and not item.queued and item is not self._running:
                self._schedule(item)
        return True

    def _clip(self, t: Term, lo: int, hi: int) -> bool:
        d = self.dom(t)
        if lo <= d.min and hi >= d.max:
            return False
        return self._narrow(t, d.clip(lo, hi))

    def _schedule(self, item) -> None:
        item.queued = True
        if item.is_guard:
            heapq.heappush(self._gheap, (item.seq, item.uid, item))
        else:
            self._queue.append(item)

    def _register(self, item, vs: Iterable[FdVar]) -> None:
        self._seq += 1
        item.seq = self._seq
        item.uid = self._seq
        seen = set()
        for v in vs:
            if v.id in seen:
                continue
            seen.add(v.id)
            lst = self._watch[v.id]
            lst.append(item)
            self._trail.append((-1, lst.pop))
        self._schedule(item)

    def _deactivate(self, item) -> None:
        if item.active:
            item.active = False
            self._undo(lambda: setattr(item, "active", True))

    def add_taint(self) -> None:
        """Record that a budget cut the model short in the current branch."""
        self.taints += 1
        self.stats.taint_events += 1
        self._undo(self._untaint)

    def _untaint(self) -> None:
        self.taints -= 1

    def fail(self) -> None:
        self._failed = True
        for item in self._queue:
            item.queued = False
        for _, _, item in self._gheap:
            item.queued = False
        self._queue.clear()
        self._gheap.clear()

    # -- snapshots --------------------------------------------------------

    def snapshot(self) -> _Token:
        tok = _Token(len(self._trail), len(self._dom), list(self._queue), list(self._gheap), self._failed)
        self._tokens.append(tok)
        return tok

    def _pop_token(self, tok: _Token) -> None:
        if not self._tokens or self._tokens[-1] is not tok:
            raise TokenOrderViolation("snapshot tokens must be restored in LIFO order")
        self._tokens.pop()

    def restore(self, tok: _Token) -> None:
        self._pop_token(tok)
        trail, dom = self._trail, self._dom
        while len(trail) > tok.trail_len:
            vid, x = trail.pop()
            if vid >= 0:
                dom[vid] = x
            else:
                x()
        for item in self._queue:
            item.queued = False
        for _, _, item in self._gheap:
            item.queued = False
        self._queue = deque(tok.queue)
        self._gheap = list(tok.gheap)
        for item in self._queue:
            item.queued = True
        for _, _, item in self._gheap:
            item.queued = True
        self._failed = tok.failed

    def release(self, tok: _Token) -> None:
        """Drop a token, keeping every change made since it was taken."""
        self._pop_token(tok)

    def state(self) -> tuple:
        """Logical state, for exactness checks of snapshot/restore."""
        items = {id(i): i for lst in self._watch for i in lst}
        return (
            tuple(d.intervals for d in self._dom),
            tuple(tuple(i.uid for i in lst) for lst in self._watch),
            tuple(sorted((i.uid, i.active, i.queued) for i in items.values())),
            tuple(sorted((k, tuple(v)) for k, v in self._edges.items() if v)),
            tuple(i.uid for i in self._queue),
            tuple(sorted(e[0] for e in self._gheap)),
            self._failed,
            self.taints,
        )

    # -- posting ----------------------------------------------------------

    def post(self, c: Constraint) -> None:
        if self._failed:
            return
        try:
            self._post(c)
        except _Fail:
            self.fail()

    def _post(self, c: Constraint) -> None:
        if isinstance(c, Lin):
            self._post_lin(c)
        elif isinstance(c, And):
            for x in c.items:
                self._post(x)
        elif isinstance(c, Or):
            if not c.items:
                raise _Fail
            if len(c.items) == 1:
                self._post(c.items[0])
            else:
                self._register(_Disjunction(c), variables(c))
        elif isinstance(c, Times):
            self._register(_TimesProp(c), variables(c))
        elif isinstance(c, Div):
            self._register(_DivProp(c), variables(c))
        elif isinstance(c, Mod):
            self._register(_ModProp(c), variables(c))
        else:
            raise TypeError(f"not a constraint: {c!r}")

    def _post_lin(self, c: Lin) -> None:
        n = len(c.coefs)
        if n == 0:
            s = c.const
            if not (s == 0 if c.op == "==" else s != 0 if c.op == "!=" else s <= 0):
                raise _Fail
            return
        if n == 1:
            a, v = c.coefs[0]
            d = self._dom[v.id]
            if c.op == "<=":
                # a*v <= -const
                if a > 0:
                    self._clip(v, d.min, _fdiv(-c.const, a))
                else:
                    self._clip(v, _cdiv(-c.const, a), d.max)
            elif -c.const % a == 0:
                val = -c.const // a
                self._narrow(v, d.clip(val, val) if c.op == "==" else d.remove(val))
            elif c.op == "==":
                raise _Fail
            return
        if n == 2 and c.op != "!=":
            (a, x), (b, y) = c.coefs
            if a == -b and abs(a) == 1:
                p, m = (x, y) if a == 1 else (y, x)
                # p - m + const <= 0  gives edge m -> p with weight -const
                self._add_edge(m.id, p.id, -c.const)
                if c.op == "==":
                    self._add_edge(p.id, m.id, c.const)
        self._register(_LinProp(c), (v for _, v in c.coefs))

    def _add_edge(self, u: int, v: int, w: int) -> None:
        lst = self._edges.setdefault(u, [])
        lst.append((v, w))
        self._trail.append((-1, lst.pop))

    def post_guarded(self, head: Constraint, tail: Constraint | Poster, watch: Iterable[FdVar] | None = None) -> None:
        """Suspend ``head -> tail``: post `tail` once `head` is entailed, drop it if disentailed."""
        fire = tail if callable(tail) else (lambda s, t=tail: s.post(t))
        self.add_guard(lambda s: s.entailment(head), fire, variables(head) if watch is None else watch)

    def add_guard(self, test: Callable[["Store"], Ent], fire: Poster, watch: Iterable[FdVar], group=None) -> "Guard":
        g = Guard(test, fire, group)
        if not self._failed:
            self._register(g, watch)
        return g

    def post_constructive_disjunction(
        self,
        c1: Constraint | Poster,
        c2: Constraint | Poster,
        watch: Iterable[FdVar] | None = None,
        group=None,
    ) -> None:
        """Keep only the values that survive at least one of the two branches."""
        if watch is None:
            watch = set()
            for c in (c1, c2):
                if not callable(c):
                    watch |= variables(c)
        b1 = c1 if callable(c1) else (lambda s, t=c1: s.post(t))
        b2 = c2 if callable(c2) else (lambda s, t=c2: s.post(t))
        if not self._failed:
            self._register(ConstructiveDisjunction(b1, b2, group), watch)

    # -- propagation ------------------------------------------------------

    def _tick(self) -> None:
        st = self.stats
        st.propagations += 1
        if st.propagations > self.propagation_budget:
            self.budget_exhausted = True
            raise BudgetExhausted(f"more than {self.propagation_budget} propagation steps")
        if self.deadline is not None and not st.propagations & 255 and time.monotonic() > self.deadline:
            raise WallClockExceeded("deadline passed during propagation")

    def propagate(self) -> Status:
        if self._failed:
            return Status.FAILED
        try:
            while True:
                q = self._queue
                while q:
                    p = q.popleft()
                    p.queued = False
                    if not p.active:
                        continue
                    self._tick()
                    self._running = p
                    try:
                        p.run(self)
                    finally:
                        self._running = None
                if not self._gheap:
                    return Status.FIXPOINT
                _, _, g = heapq.heappop(self._gheap)
                g.queued = False
                if g.active:
                    self._tick()
                    g.run(self)
                    if self._failed:
                        return Status.FAILED
        except _Fail:
            self.fail()
            return Status.FAILED

    def speculate(self, poster: Poster) -> dict[int, Domain] | None:
        """Post and propagate on a snapshot; None if that fails, else the narrowed domains.

        Only variables that existed before the speculation are reported.
        Nested combinators run in a reduced mode while speculating.
        """
        tok = self.snapshot()
        self.speculating += 1
        self.stats.speculations += 1
        try:
            poster(self)
            if self.propagate() is Status.FAILED:
                return None
            out = {}
            for vid, _ in self._trail[tok.trail_len:]:
                if 0 <= vid < tok.nvars:
                    out[vid] = self._dom[vid]
            return out
        finally:
            self.speculating -= 1
            self.restore(tok)

    # -- entailment -------------------------------------------------------

    def entailment(self, c: Constraint) -> Ent:
        """Conservative three-valued test of `c` against the current bounds."""
        if isinstance(c, Lin):
            return self._lin_entailment(c)
        if isinstance(c, And):
            res = ENTAILED
            for x in c.items:
                e = self.entailment(x)
                if e is DISENTAILED:
                    return DISENTAILED
                if e is UNKNOWN:
                    res = UNKNOWN
            return res
        if isinstance(c, Or):
            res = DISENTAILED
            for x in c.items:
                e = self.entailment(x)
                if e is ENTAILED:
                    return ENTAILED
                if e is UNKNOWN:
                    res = UNKNOWN
            return res
        return self._arith_entailment(c)

    def _lin_entailment(self, c: Lin) -> Ent:
        lo = hi = c.const
        dom = self._dom
        for a, v in c.coefs:
            d = dom[v.id].intervals
            if a > 0:
                lo += a * d[0][0]
                hi += a * d[-1][1]
            else:
                lo += a * d[-1][1]
                hi += a * d[0][0]
        e = _judge(lo, hi, c.op)
        if e is not UNKNOWN or len(c.coefs) != 2:
            return e
        (a, x), (b, y) = c.coefs
        if a != -b or abs(a) != 1:
            return e
        p, m = (x, y) if a == 1 else (y, x)
        # bounds on p - m from the difference graph
        up = self._shortest(m.id, p.id)
        if up is not None:
            e = _judge(-(1 << 62), up + c.const, c.op)
            if e is not UNKNOWN:
                return e
        down = self._shortest(p.id, m.id)
        if down is not None:
            e = _judge(-down + c.const, 1 << 62, c.op)
            if e is not UNKNOWN:
                return e
            if up is not None:
                return _judge(-down + c.const, up + c.const, c.op)
        return UNKNOWN

    def _shortest(self, src: int, dst: int) -> int | None:
        edges = self._edges
        if not edges.get(src):
            return None
        dist = {src: 0}
        queue = deque([src])
        inq = {src}
        relax = 0
        while queue:
            u = queue.popleft()
            inq.discard(u)
            du = dist[u]
            for v, w in edges.get(u, ()):
                nd = du + w
                if v not in dist or nd < dist[v]:
                    dist[v] = nd
                    relax += 1
                    if relax > SPFA_LIMIT:
                        return None
                    if v not in inq:
                        inq.add(v)
                        queue.append(v)
        return dist.get(dst)

    def _arith_entailment(self, c: Constraint) -> Ent:
        x, y, z = c.x, c.y, c.z
        if isinstance(c, (Div, Mod)) and self.is_fixed(z) and self.dom(z).value == 0:
            return DISENTAILED
        if self.is_fixed(x) and self.is_fixed(y) and self.is_fixed(z):
            yv, zv = self.value(y), self.value(z)
            if isinstance(c, Times):
                ok = self.value(x) == yv * zv
            else:
                ok = self.value(x) == (trunc_div(yv, zv) if isinstance(c, Div) else trunc_mod(yv, zv))
            return ENTAILED if ok else DISENTAILED
        return UNKNOWN

    # -- search -----------------------------------------------------------

    def search(self, vs: list[FdVar], budget: int | None = None) -> "Search":
        return Search(self, vs, budget)

    def label(self, vs: list[FdVar], budget: int | None = None) -> "LabelResult":
        s = Search(self, vs, budget)
        it = iter(s)
        try:
            sol = next(it, None)
        finally:
            it.close()
        if sol is not None:
            return LabelResult("solution", sol, s.nodes)
        return LabelResult("budget" if s.budget_out else "exhausted", None, s.nodes)


def _judge(lo: int, hi: int, op: str) -> Ent:
    if op == "<=":
        if hi <= 0:
            return ENTAILED
        if lo > 0:
            return DISENTAILED
        return UNKNOWN
    if lo > 0 or hi < 0:
        res = DISENTAILED
    elif lo == hi == 0:
        res = ENTAILED
    else:
        return UNKNOWN
    return res if op == "==" else ent_not(res)


def _fdiv(p: int, q: int) -> int:
    return p // q if q > 0 else (-p) // (-q)


def _cdiv(p: int, q: int) -> int:
    return -_fdiv(-p, q)


# ---------------------------------------------------------------------------
# propagators


class _Item:
    is_guard = False
    __slots__ = ("seq", "uid", "active", "queued")

    def __init__(self) -> None:
        self.seq = 0
        self.uid = 0
        self.active = True
        self.queued = False


class _LinProp(_Item):
    __slots__ = ("c",)

    def __init__(self, c: Lin):
        super().__init__()
        self.c = c

    def run(self, s: Store) -> None:
        c = self.c
        coefs, k, op = c.coefs, c.const, c.op
        dom = s._dom
        if op == "!=":
            free = None
            acc = k
            for a, v in coefs:
                d = dom[v.id]
                if d.is_singleton():
                    acc += a * d.min
                elif free is None:
                    free = (a, v)
                else:
                    return
            if free is None:
                if acc == 0:
                    raise _Fail
                s._deactivate(self)
            elif -acc % free[0] == 0:
                s._narrow(free[1], dom[free[1].id].remove(-acc // free[0]))
                s._deactivate(self)
            else:
                s._deactivate(self)
            return
        if len(coefs) == 2 and op == "==":
            (a, x), (b, y) = coefs
            if abs(a) == 1 and abs(b) == 1:
                # a*x + b*y + k = 0  ->  x = -a*b*y - a*k
                sgn = -a * b
                dy = dom[y.id]
                img = (dy if sgn == 1 else dy.negate()).shift(-a * k)
                s._narrow(x, dom[x.id].intersect(img))
                dx = dom[x.id]
                pre = (dx if sgn == 1 else dx.negate()).shift(-b * k)
                s._narrow(y, dom[y.id].intersect(pre))
                return
        eq_ = op == "=="
        while True:
            lo = hi = k
            for a, v in coefs:
                d = dom[v.id].intervals
                if a > 0:
                    lo += a * d[0][0]
                    hi += a * d[-1][1]
                else:
                    lo += a * d[-1][1]
                    hi += a * d[0][0]
            if lo > 0 or (eq_ and hi < 0):
                raise _Fail
            changed = False
            for a, v in coefs:
                d = dom[v.id]
                vl, vh = d.min, d.max
                if a > 0:
                    mn, mx = a * vl, a * vh
                else:
                    mn, mx = a * vh, a * vl
                # a*v <= -(lo - mn);  a*v >= -(hi - mx) when equality
                r = mn - lo
                if a > 0:
                    nh = _fdiv(r, a)
                    nl = _cdiv(mx - hi, a) if eq_ else vl
                else:
                    nl = _cdiv(r, a)
                    nh = _fdiv(mx - hi, a) if eq_ else vh
                if nl > vl or nh < vh:
                    s._narrow(v, d.clip(nl, nh))
                    changed = True
            if not changed:
                return


def _bounds(s: Store, t: Term) -> tuple[int, int]:
    if isinstance(t, FdVar):
        d = s._dom[t.id]
        return d.min, d.max
    return t, t


def _sign_segments(s: Store, t: Term) -> list[tuple[int, int]]:
    """Bounds of the negative and positive parts of `t`'s domain (zero excluded)."""
    d = s.dom(t)
    out = []
    neg = d.clip(d.min, -1)
    if neg.intervals:
        out.append((neg.min, neg.max))
    pos = d.clip(1, d.max)
    if pos.intervals:
        out.append((pos.min, pos.max))
    return out


def _remove_zero(s: Store, t: Term) -> None:
    if isinstance(t, FdVar):
        s._narrow(t, s._dom[t.id].remove(0))
    elif t == 0:
        raise _Fail


class _TimesProp(_Item):
    __slots__ = ("c",)

    def __init__(self, c: Times):
        super().__init__()
        self.c = c

    def run(self, s: Store) -> None:
        x, y, z = self.c.x, self.c.y, self.c.z
        for _ in range(_MAX_ROUNDS):
            yl, yh = _bounds(s, y)
            zl, zh = _bounds(s, z)
            ps = (yl * zl, yl * zh, yh * zl, yh * zh)
            changed = s._clip(x, min(ps), max(ps))
            if 0 not in s.dom(x):
                _remove_zero(s, y)
                _remove_zero(s, z)
            changed |= self._quotient(s, y, z)
            changed |= self._quotient(s, z, y)
            if not changed:
                return
        s._schedule(self)

    def _quotient(self, s: Store, y: Term, z: Term) -> bool:
        """Narrow y to the values with y*z in dom(x) for some z."""
        x = self.c.x
        if 0 in s.dom(z) and 0 in s.dom(x):
            return False
        xl, xh = _bounds(s, self.c.x)
        lo = hi = None
        for zl, zh in _sign_segments(s, z):
            qs = [Fraction(a, b) for a in (xl, xh) for b in (zl, zh)]
            ql, qh = ceil(min(qs)), floor(max(qs))
            lo = ql if lo is None else min(lo, ql)
            hi = qh if hi is None else max(hi, qh)
        if lo is None:
            raise _Fail
        return s._clip(y, lo, hi)


class _DivProp(_Item):
    __slots__ = ("c",)

    def __init__(self, c: Div):
        super().__init__()
        self.c = c

    def run(self, s: Store) -> None:
        x, y, z = self.c.x, self.c.y, self.c.z
        _remove_zero(s, z)
        for _ in range(_MAX_ROUNDS):
            yl, yh = _bounds(s, y)
            segs = _sign_segments(s, z)
            qs = [trunc_div(a, b) for a in (yl, yh) for zl, zh in segs for b in (zl, zh)]
            changed = s._clip(x, min(qs), max(qs))
            xl, xh = _bounds(s, x)
            ps = [a * b for a in (xl, xh) for zl, zh in segs for b in (zl, zh)]
            m = max(max(abs(zl), abs(zh)) for zl, zh in segs) - 1
            changed |= s._clip(y, min(ps) - m, max(ps) + m)
            if not changed:
                return
        s._schedule(self)


class _ModProp(_Item):
    __slots__ = ("c",)

    def __init__(self, c: Mod):
        super().__init__()
        self.c = c

    def run(self, s: Store) -> None:
        x, y, z = self.c.x, self.c.y, self.c.z
        _remove_zero(s, z)
        for _ in range(_MAX_ROUNDS):
            if s.is_fixed(y) and s.is_fixed(z):
                r = trunc_mod(s.value(y), s.value(z))
                s._narrow(x, s.dom(x).clip(r, r))
                return
            zl, zh = _bounds(s, z)
            yl, yh = _bounds(s, y)
            m = max(abs(zl), abs(zh)) - 1
            if yl >= 0:
                changed = s._clip(x, 0, min(m, yh))
            elif yh <= 0:
                changed = s._clip(x, max(-m, yl), 0)
            else:
                changed = s._clip(x, max(-m, yl), min(m, yh))
            xl, xh = _bounds(s, x)
            if xl > 0:
                changed |= s._clip(y, xl, yh)
            elif xh < 0:
                changed |= s._clip(y, yl, xh)
            if not changed:
                return
        s._schedule(self)


# ---------------------------------------------------------------------------
# suspended items


class Group:
    """Sibling guards of one combinator; the first to fire retires the rest."""

    __slots__ = ("done",)

    def __init__(self) -> None:
        self.done = False


def _commit(s: Store, group: Group | None) -> None:
    if group is not None and not group.done:
        group.done = True
        s._undo(lambda: setattr(group, "done", False))


class Guard(_Item):
    is_guard = True
    __slots__ = ("test", "fire", "group")

    def __init__(self, test: Callable[[Store], Ent], fire: Poster, group: Group | None = None):
        super().__init__()
        self.test = test
        self.fire = fire
        self.group = group

    def run(self, s: Store) -> None:
        if self.group is not None and self.group.done:
            s._deactivate(self)
            return
        e = self.test(s)
        if e is ENTAILED:
            s._deactivate(self)
            _commit(s, self.group)
            self.fire(s)
        elif e is DISENTAILED:
            s._deactivate(self)


class _Disjunction(_Item):
    is_guard = True
    __slots__ = ("c",)

    def __init__(self, c: Or):
        super().__init__()
        self.c = c

    def run(self, s: Store) -> None:
        alive = []
        for x in self.c.items:
            e = s.entailment(x)
            if e is ENTAILED:
                s._deactivate(self)
                return
            if e is UNKNOWN:
                alive.append(x)
        if not alive:
            s._deactivate(self)
            s.fail()
        elif len(alive) == 1:
            s._deactivate(self)
            s.post(alive[0])


class ConstructiveDisjunction(_Item):
    is_guard = True
    __slots__ = ("b1", "b2", "group")

    def __init__(self, b1: Poster, b2: Poster, group: Group | None = None):
        super().__init__()
        self.b1 = b1
        self.b2 = b2
        self.group = group

    def run(self, s: Store) -> None:
        if self.group is not None and self.group.done:
            s._deactivate(self)
            return
        if s.speculating:
            return
        r1 = s.speculate(self.b1)
        r2 = s.speculate(self.b2)
        if r1 is None and r2 is None:
            s._deactivate(self)
            s.fail()
        elif r1 is None or r2 is None:
            s._deactivate(self)
            _commit(s, self.group)
            (self.b2 if r1 is None else self.b1)(s)
        else:
            try:
                for vid in r1.keys() & r2.keys():
                    v = s._vars[vid]
                    s._narrow(v, s._dom[vid].intersect(r1[vid].union(r2[vid])))
            except _Fail:
                s.fail()


# ---------------------------------------------------------------------------
# labeling


@dataclass
class LabelResult:
    status: str  # "solution" | "exhausted" | "budget"
    valuation: dict[FdVar, int] | None
    nodes: int


class Search:
    """Depth-first labeling; values are tried by increasing magnitude, non-negative first.

    Iterating yields each solution as a valuation of the labeled variables
    while the store sits in that solution's state.
    """

    def __init__(self, store: Store, vs: list[FdVar], budget: int | None = None):
        self.store = store
        self.vars = list(vs)
        self.budget = budget
        self.nodes = 0
        self.budget_out = False
        self._jump: int | None = None

    def backjump(self, level: int) -> None:
        """Abandon the current subtree: the next value tried is for a variable at position <= `level`."""
        self._jump = level

    def __iter__(self) -> Iterator[dict[FdVar, int]]:
        s = self.store
        if s.propagate() is Status.FAILED:
            return
        yield from self._dfs(0)

    def _dfs(self, i: int) -> Iterator[dict[FdVar, int]]:
        s = self.store
        vs = self.vars
        while i < len(vs) and s.is_fixed(vs[i]):
            i += 1
        if i == len(vs):
            yield {v: s.value(v) for v in vs}
            return
        v = vs[i]
        for val in s.dom(v).values_by_magnitude():
            if self.budget is not None and self.nodes >= self.budget:
                self.budget_out = True
                return
            self.nodes += 1
            s.stats.label_nodes += 1
            tok = s.snapshot()
            try:
                s.post(eq(v, val))
                if s.propagate() is Status.FIXPOINT:
                    yield from self._dfs(i + 1)
            finally:
                s.restore(tok)
            if self.budget_out:
                return
            if self._jump is not None:
                if i > self._jump:
                    return
                self._jump = None


def new_store(width: IntWidth | int = 8, **kw) -> Store:
    return Store(width, **kw)

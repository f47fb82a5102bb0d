from __future__ import annotations

import pytest

from invcheck.domain import EMPTY, Domain, IntWidth, trunc_div, trunc_mod


@pytest.mark.parametrize("bits,lo,hi", [(8, -128, 127), (32, -(2**31), 2**31 - 1), (4, -8, 7), (2, -2, 1)])
def test_width_bounds(bits, lo, hi):
    w = IntWidth(bits)
    assert (w.min_int, w.max_int) == (lo, hi)
    assert w.full() == Domain.range(lo, hi)


@pytest.mark.parametrize("bits", [0, 1, 33])
def test_width_rejects_out_of_range(bits):
    with pytest.raises(ValueError):
        IntWidth(bits)


def test_canonical_merge_of_adjacent_intervals():
    d = Domain.from_intervals([(5, 6), (1, 2), (3, 4), (9, 9)])
    assert d.intervals == ((1, 6), (9, 9))


def test_remove_splits_and_union_rejoins():
    d = Domain.range(-3, 3).remove(0)
    assert d.intervals == ((-3, -1), (1, 3))
    assert 0 not in d and 1 in d
    assert d.union(Domain.singleton(0)) == Domain.range(-3, 3)


def test_empty_domain():
    assert EMPTY.is_empty
    assert Domain.range(1, 2).intersect(Domain.range(3, 4)).is_empty
    assert Domain.range(3, 1).is_empty


def test_clip_and_shift_and_negate():
    d = Domain.of([-5, -1, 2, 7])
    assert list(d.clip(-1, 5)) == [-1, 2]
    assert list(d.shift(1)) == [-4, 0, 3, 8]
    assert list(d.negate()) == [-7, -2, 1, 5]


def test_values_by_magnitude_non_negative_first():
    assert list(Domain.range(-2, 2).values_by_magnitude()) == [0, 1, -1, 2, -2]
    assert list(Domain.of([-9, 4]).values_by_magnitude()) == [4, -9]


def test_interval_cap_keeps_a_superset():
    pairs = [(2 * i, 2 * i) for i in range(100)]
    d = Domain.from_intervals(pairs, cap=8)
    assert len(d.intervals) <= 8
    assert all(2 * i in d for i in range(100))


@pytest.mark.parametrize("a,b,q,r", [(7, 2, 3, 1), (-7, 2, -3, -1), (7, -2, -3, 1), (-7, -2, 3, -1)])
def test_truncating_division(a, b, q, r):
    assert trunc_div(a, b) == q
    assert trunc_mod(a, b) == r
    assert q * b + r == a

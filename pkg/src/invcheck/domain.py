"""Integer widths and interval-union domains."""

from __future__ import annotations

import heapq
from bisect import bisect_right
from dataclasses import dataclass
from typing import Iterable, Iterator

MAX_INTERVALS = 64


@dataclass(frozen=True)
class IntWidth:
    """Two's-complement width; only the range matters, arithmetic never wraps."""

    bits: int = 8

    def __post_init__(self) -> None:
        if not 2 <= self.bits <= 32:
            raise ValueError(f"width must be in 2..32, got {self.bits}")

    @property
    def min_int(self) -> int:
        return -(1 << (self.bits - 1))

    @property
    def max_int(self) -> int:
        return (1 << (self.bits - 1)) - 1

    def contains(self, value: int) -> bool:
        return self.min_int <= value <= self.max_int

    def full(self) -> "Domain":
        return Domain.range(self.min_int, self.max_int)


class Domain:
    """Immutable finite union of disjoint, non-adjacent closed intervals.

    The interval tuple is kept canonical: sorted, and consecutive intervals
    are separated by a gap of at least one missing value.
    """

    __slots__ = ("intervals", "_starts")

    def __init__(self, intervals: tuple[tuple[int, int], ...] = ()):
        self.intervals = intervals
        self._starts: list[int] | None = None

    # -- construction -----------------------------------------------------

    @classmethod
    def range(cls, lo: int, hi: int) -> "Domain":
        return cls(((lo, hi),)) if lo <= hi else EMPTY

    @classmethod
    def singleton(cls, value: int) -> "Domain":
        return cls(((value, value),))

    @classmethod
    def of(cls, values: Iterable[int]) -> "Domain":
        return cls.from_intervals((v, v) for v in values)

    @classmethod
    def from_intervals(cls, pairs: Iterable[tuple[int, int]], cap: int = MAX_INTERVALS) -> "Domain":
        """Canonicalize arbitrary intervals; beyond `cap` pieces the smallest gaps are filled."""
        merged: list[list[int]] = []
        for lo, hi in sorted(p for p in pairs if p[0] <= p[1]):
            if merged and lo <= merged[-1][1] + 1:
                if hi > merged[-1][1]:
                    merged[-1][1] = hi
            else:
                merged.append([lo, hi])
        if len(merged) > cap:
            gaps = sorted(range(len(merged) - 1), key=lambda i: (merged[i + 1][0] - merged[i][1], i))
            fill = set(gaps[: len(merged) - cap])
            out: list[list[int]] = []
            for i, iv in enumerate(merged):
                if out and (i - 1) in fill:
                    out[-1][1] = iv[1]
                else:
                    out.append(list(iv))
            merged = out
        return cls(tuple((lo, hi) for lo, hi in merged))

    # -- queries ----------------------------------------------------------

    def is_empty(self) -> bool:
        return not self.intervals

    @property
    def min(self) -> int:
        return self.intervals[0][0]

    @property
    def max(self) -> int:
        return self.intervals[-1][1]

    def is_singleton(self) -> bool:
        iv = self.intervals
        return len(iv) == 1 and iv[0][0] == iv[0][1]

    @property
    def value(self) -> int:
        if not self.is_singleton():
            raise ValueError(f"{self} is not a singleton")
        return self.intervals[0][0]

    def size(self) -> int:
        return sum(hi - lo + 1 for lo, hi in self.intervals)

    def __len__(self) -> int:
        return len(self.intervals)

    def __contains__(self, value: int) -> bool:
        iv = self.intervals
        if not iv or value < iv[0][0] or value > iv[-1][1]:
            return False
        if len(iv) == 1:
            return True
        if self._starts is None:
            self._starts = [lo for lo, _ in iv]
        i = bisect_right(self._starts, value) - 1
        return i >= 0 and value <= iv[i][1]

    def __iter__(self) -> Iterator[int]:
        for lo, hi in self.intervals:
            yield from range(lo, hi + 1)

    def hull(self) -> "Domain":
        return Domain.range(self.min, self.max) if self.intervals else EMPTY

    def issubset(self, other: "Domain") -> bool:
        return self.intersect(other, cap=None) == self

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Domain) and self.intervals == other.intervals

    def __hash__(self) -> int:
        return hash(self.intervals)

    def __repr__(self) -> str:
        if not self.intervals:
            return "{}"
        parts = [str(lo) if lo == hi else f"{lo}..{hi}" for lo, hi in self.intervals]
        return "{" + ", ".join(parts) + "}"

    # -- set operations ---------------------------------------------------

    def intersect(self, other: "Domain", cap: int | None = MAX_INTERVALS) -> "Domain":
        """Intersection; if it would exceed `cap` pieces, only the bounds are narrowed.

        The capped result stays a subset of `self`, so narrowing is monotone.
        """
        a, b = self.intervals, other.intervals
        if not a or not b:
            return EMPTY
        if len(b) == 1:
            return self.clip(b[0][0], b[0][1])
        if len(a) == 1:
            return other.clip(a[0][0], a[0][1])
        out = []
        i = j = 0
        while i < len(a) and j < len(b):
            lo = a[i][0] if a[i][0] > b[j][0] else b[j][0]
            hi = a[i][1] if a[i][1] < b[j][1] else b[j][1]
            if lo <= hi:
                out.append((lo, hi))
            if a[i][1] < b[j][1]:
                i += 1
            else:
                j += 1
        if cap is not None and len(out) > cap:
            return self.clip(out[0][0], out[-1][1])
        return Domain(tuple(out)) if out else EMPTY

    def clip(self, lo: int, hi: int) -> "Domain":
        iv = self.intervals
        if not iv or lo > hi:
            return EMPTY
        if lo <= iv[0][0] and hi >= iv[-1][1]:
            return self
        out = []
        for a, b in iv:
            if b < lo:
                continue
            if a > hi:
                break
            out.append((a if a > lo else lo, b if b < hi else hi))
        return Domain(tuple(out)) if out else EMPTY

    def remove(self, value: int, cap: int | None = MAX_INTERVALS) -> "Domain":
        if value not in self:
            return self
        out = []
        for lo, hi in self.intervals:
            if lo <= value <= hi:
                if lo < value:
                    out.append((lo, value - 1))
                if value < hi:
                    out.append((value + 1, hi))
            else:
                out.append((lo, hi))
        if cap is not None and len(out) > cap:
            return self.clip(out[0][0], out[-1][1]) if out else EMPTY
        return Domain(tuple(out)) if out else EMPTY

    def union(self, other: "Domain", cap: int = MAX_INTERVALS) -> "Domain":
        return Domain.from_intervals(self.intervals + other.intervals, cap=cap)

    def shift(self, offset: int) -> "Domain":
        if offset == 0:
            return self
        return Domain(tuple((lo + offset, hi + offset) for lo, hi in self.intervals))

    def negate(self) -> "Domain":
        return Domain(tuple((-hi, -lo) for lo, hi in reversed(self.intervals)))

    def values_by_magnitude(self) -> Iterator[int]:
        """Values ordered 0, 1, -1, 2, -2, ... restricted to the domain; lazy."""
        streams = []
        for lo, hi in self.intervals:
            if lo >= 0:
                streams.append(((v, 0, v) for v in range(lo, hi + 1)))
            elif hi < 0:
                streams.append(((-v, 1, v) for v in range(hi, lo - 1, -1)))
            else:
                streams.append(((v, 0, v) for v in range(0, hi + 1)))
                streams.append(((-v, 1, v) for v in range(-1, lo - 1, -1)))
        for _, _, v in heapq.merge(*streams):
            yield v


EMPTY = Domain(())


def trunc_div(a: int, b: int) -> int:
    """C-style division rounding toward zero."""
    q = abs(a) // abs(b)
    return q if (a >= 0) == (b >= 0) else -q


def trunc_mod(a: int, b: int) -> int:
    """C-style remainder; the sign follows the dividend."""
    return a - b * trunc_div(a, b)

"""Exact rational scalars and unions of closed rational intervals.

Every scalar in the package is a :class:`fractions.Fraction`; it is always
kept in lowest terms with a positive denominator, so no extra rational type
is needed.  Files carry rationals as ``"p/q"`` strings.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .symbols import SymbolSeq

Rational = Fraction


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings; floats are refused."""
    if isinstance(value, float):
        raise TypeError("floats are not exact; pass a 'p/q' string or Fraction")
    if isinstance(value, str):
        return parse_rational(value)
    return Fraction(value)


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if not text or any(c in text for c in ".eE"):
        raise ValueError(f"expected 'p/q' or an integer, got {text!r}")
    return Fraction(text)


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def rat_floor(q: Fraction) -> int:
    return math.floor(q)


def rat_ceil(q: Fraction) -> int:
    return math.ceil(q)


@dataclass(frozen=True, order=True)
class Interval:
    """Closed interval ``[lo, hi]``; ``lo == hi`` is a point."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        lo, hi = Fraction(self.lo), Fraction(self.hi)
        if lo > hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def length(self) -> Fraction:
        return self.hi - self.lo

    def __contains__(self, x) -> bool:
        return self.lo <= x <= self.hi

    def overlaps(self, other: "Interval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def intersection(self, other: "Interval") -> "Interval | None":
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        return Interval(lo, hi) if lo <= hi else None

    def contains_interval(self, other: "Interval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def affine(self, scale: Fraction, offset: Fraction) -> "Interval":
        a, b = scale * self.lo + offset, scale * self.hi + offset
        return Interval(min(a, b), max(a, b))

    def __str__(self):
        return f"[{self.lo}, {self.hi}]"


def _merge_sorted(parts: Sequence[Interval]) -> list[Interval]:
    merged: list[Interval] = []
    for iv in parts:
        if merged and iv.lo <= merged[-1].hi:
            last = merged[-1]
            if iv.hi > last.hi:
                merged[-1] = Interval(last.lo, iv.hi)
        else:
            merged.append(iv)
    return merged


class IntervalUnion:
    """Canonical finite union of closed intervals.

    Parts are sorted and separated by gaps of strictly positive length;
    touching or overlapping inputs are merged on construction.
    """

    __slots__ = ("_parts", "_ints")

    def __init__(self, parts: Iterable[Interval | tuple] = ()):
        items = [p if isinstance(p, Interval) else Interval(*p) for p in parts]
        # generated cylinder covers arrive sorted; skip the sort in that case
        if any(items[i].lo > items[i + 1].lo for i in range(len(items) - 1)):
            items.sort()
        self._parts: tuple[Interval, ...] | None = tuple(_merge_sorted(items))
        self._ints = None

    @classmethod
    def from_integers(cls, den: int, los: Sequence[int], his: Sequence[int]) -> "IntervalUnion":
        """Union of ``[los[i]/den, his[i]/den]`` given sorted integer numerators.

        Parts are materialised as Fractions only on demand, which keeps large
        cylinder covers cheap when only thickness is needed.
        """
        if den <= 0:
            raise ValueError("denominator must be positive")
        n = len(los)
        if len(his) != n or any(los[i] > his[i] for i in range(n)):
            raise ValueError("bad integer intervals")
        if any(his[i] >= los[i + 1] for i in range(n - 1)):
            return cls(Interval(Fraction(a, den), Fraction(b, den)) for a, b in zip(los, his))
        self = cls.__new__(cls)
        self._parts = None
        self._ints = (den, list(los), list(his))
        return self

    @property
    def parts(self) -> tuple[Interval, ...]:
        if self._parts is None:
            den, los, his = self._ints
            self._parts = tuple(
                Interval(Fraction(a, den), Fraction(b, den)) for a, b in zip(los, his)
            )
        return self._parts

    def integer_form(self) -> tuple[int, list[int], list[int]]:
        """``(den, los, his)`` with every endpoint equal to ``numerator/den``."""
        if self._ints is None:
            parts = self._parts
            den = 1
            for d in {e.denominator for p in parts for e in (p.lo, p.hi)}:
                den = math.lcm(den, d)
            los = [p.lo.numerator * (den // p.lo.denominator) for p in parts]
            his = [p.hi.numerator * (den // p.hi.denominator) for p in parts]
            self._ints = (den, los, his)
        return self._ints

    def __len__(self):
        if self._parts is None:
            return len(self._ints[1])
        return len(self._parts)

    def __iter__(self):
        return iter(self.parts)

    def __bool__(self):
        return len(self) > 0

    def __eq__(self, other):
        return isinstance(other, IntervalUnion) and self.parts == other.parts

    def __hash__(self):
        return hash(self.parts)

    def __repr__(self):
        return "IntervalUnion([" + ", ".join(str(p) for p in self.parts) + "])"

    @property
    def hull(self) -> Interval:
        if not self:
            raise ValueError("empty union has no hull")
        if self._parts is None:
            den, los, his = self._ints
            return Interval(Fraction(los[0], den), Fraction(his[-1], den))
        return Interval(self._parts[0].lo, self._parts[-1].hi)

    @property
    def measure(self) -> Fraction:
        return sum((p.length for p in self.parts), Fraction(0))

    def __contains__(self, x) -> bool:
        lo, hi = 0, len(self.parts)
        while lo < hi:
            mid = (lo + hi) // 2
            if self.parts[mid].hi < x:
                lo = mid + 1
            else:
                hi = mid
        return lo < len(self.parts) and self.parts[lo].lo <= x

    def contains_union(self, other: "IntervalUnion") -> bool:
        return union_intersect(self, other) == other

    def affine(self, scale: Fraction, offset: Fraction) -> "IntervalUnion":
        return IntervalUnion(p.affine(scale, offset) for p in self.parts)

    def union(self, other: "IntervalUnion") -> "IntervalUnion":
        return IntervalUnion(self.parts + other.parts)


def union_intersect(a: IntervalUnion, b: IntervalUnion) -> IntervalUnion:
    """Set intersection of two canonical unions by a merge sweep."""
    out = []
    i = j = 0
    pa, pb = a.parts, b.parts
    while i < len(pa) and j < len(pb):
        lo = max(pa[i].lo, pb[j].lo)
        hi = min(pa[i].hi, pb[j].hi)
        if lo <= hi:
            out.append(Interval(lo, hi))
        if pa[i].hi < pb[j].hi:
            i += 1
        else:
            j += 1
    return IntervalUnion(out)


def eventually_periodic_value(digits: SymbolSeq, beta: Fraction) -> Fraction:
    """Exact value of ``sum(d_n / beta**n)`` for an eventually periodic digit sequence."""
    beta = Fraction(beta)
    if beta <= 1:
        raise ValueError("beta must exceed 1")
    if not digits.is_infinite:
        raise ValueError("a finite prefix has no exact infinite-sum value")
    inv = 1 / beta
    head = sum((d * inv ** (k + 1) for k, d in enumerate(digits.preperiod)), Fraction(0))
    p = len(digits.period)
    block = sum((d * inv ** (k + 1) for k, d in enumerate(digits.period)), Fraction(0))
    bp = beta**p
    return head + inv ** len(digits.preperiod) * block * bp / (bp - 1)


def interval_to_row(iv: Interval) -> tuple[int, int, int, int]:
    return (iv.lo.numerator, iv.lo.denominator, iv.hi.numerator, iv.hi.denominator)

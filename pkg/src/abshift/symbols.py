"""Digit sequences: finite prefixes and eventually periodic words.

A :class:`SymbolSeq` is either a finite word (``period`` empty) or the
infinite sequence ``preperiod + period + period + ...``.  Infinite sequences
are kept in canonical form (primitive period, shortest preperiod) so that two
equal sequences compare equal as Python objects.

Textual form: digits separated by commas, the period wrapped in parentheses,
e.g. ``"0,(1)"`` or ``"3,(2,1)"``; a finite prefix is just ``"1,1,0"``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import islice
from math import lcm
from typing import Iterable, Iterator


def _primitive_root(word: tuple[int, ...]) -> tuple[int, ...]:
    n = len(word)
    for d in range(1, n + 1):
        if n % d == 0 and word[:d] * (n // d) == word:
            return word[:d]
    return word


@dataclass(frozen=True)
class SymbolSeq:
    preperiod: tuple[int, ...] = ()
    period: tuple[int, ...] = ()

    def __post_init__(self):
        pre = tuple(int(d) for d in self.preperiod)
        per = tuple(int(d) for d in self.period)
        if any(d < 0 for d in pre + per):
            raise ValueError("digits must be non-negative")
        if per:
            per = _primitive_root(per)
            # absorb trailing preperiod symbols into a rotated period
            while pre and pre[-1] == per[-1]:
                pre = pre[:-1]
                per = per[-1:] + per[:-1]
        object.__setattr__(self, "preperiod", pre)
        object.__setattr__(self, "period", per)

    @classmethod
    def finite(cls, digits: Iterable[int]) -> "SymbolSeq":
        return cls(tuple(digits), ())

    @classmethod
    def periodic(cls, period: Iterable[int], preperiod: Iterable[int] = ()) -> "SymbolSeq":
        period = tuple(period)
        if not period:
            raise ValueError("period must be non-empty")
        return cls(tuple(preperiod), period)

    @classmethod
    def parse(cls, text: str) -> "SymbolSeq":
        """Parse the ``"0,(1)"`` textual form."""
        text = text.strip().replace(" ", "")
        if not text:
            return cls()
        pre_text, period_text = text, ""
        if "(" in text:
            if not text.endswith(")") or text.count("(") != 1:
                raise ValueError(f"malformed sequence {text!r}")
            pre_text, period_text = text[:-1].split("(")
            pre_text = pre_text.rstrip(",")
            if not period_text:
                raise ValueError(f"empty period in {text!r}")

        def digits(s):
            return tuple(int(t) for t in s.split(",")) if s else ()

        pre, per = digits(pre_text), digits(period_text)
        return cls(pre, per)

    def __str__(self) -> str:
        pre = ",".join(map(str, self.preperiod))
        if not self.period:
            return pre
        per = "(" + ",".join(map(str, self.period)) + ")"
        return f"{pre},{per}" if pre else per

    @property
    def is_infinite(self) -> bool:
        return bool(self.period)

    def __len__(self) -> int:
        if self.period:
            raise TypeError("infinite sequence has no length")
        return len(self.preperiod)

    def __getitem__(self, i: int) -> int:
        """0-based symbol access."""
        if i < 0:
            raise IndexError(i)
        p0 = len(self.preperiod)
        if i < p0:
            return self.preperiod[i]
        if not self.period:
            raise IndexError(i)
        return self.period[(i - p0) % len(self.period)]

    def __iter__(self) -> Iterator[int]:
        yield from self.preperiod
        if self.period:
            while True:
                yield from self.period

    def prefix(self, n: int) -> tuple[int, ...]:
        if not self.period and n > len(self.preperiod):
            raise ValueError(f"only {len(self.preperiod)} digits available, {n} requested")
        return tuple(islice(self, n))

    def available(self) -> int | None:
        """Number of known digits; ``None`` for infinite sequences."""
        return None if self.period else len(self.preperiod)

    def shift(self, k: int = 1) -> "SymbolSeq":
        """The sequence with its first ``k`` symbols removed."""
        p0 = len(self.preperiod)
        if k <= p0:
            return SymbolSeq(self.preperiod[k:], self.period)
        if not self.period:
            raise ValueError("shift beyond the end of a finite prefix")
        r = (k - p0) % len(self.period)
        return SymbolSeq((), self.period[r:] + self.period[:r])

    def prepend(self, digits: Iterable[int]) -> "SymbolSeq":
        return SymbolSeq(tuple(digits) + self.preperiod, self.period)

    def symbols(self, start: int = 0) -> frozenset[int]:
        """Set of symbols occurring at 0-based positions ``>= start``."""
        if self.period:
            return frozenset(self.shift(start).preperiod) | frozenset(self.period)
        return frozenset(self.preperiod[start:])

    def horizon(self, other: "SymbolSeq") -> int:
        """Index by which two infinite sequences are known to differ if they differ."""
        return max(len(self.preperiod), len(other.preperiod)) + lcm(
            len(self.period), len(other.period)
        )

    def max_digit(self) -> int:
        digits = self.preperiod + self.period
        return max(digits) if digits else -1

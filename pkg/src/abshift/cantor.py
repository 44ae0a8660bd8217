"""Cantor sets of digit-restricted expansions: covers, thickness, intersections.

An :class:`IfsSpec` describes the attractor of the maps
``f_j(x) = (x + j) / beta`` for ``j = digit_lo..digit_hi``, i.e. the set of
``sum(w_n / beta**n)`` over words ``w`` with those digits, followed by an
affine map ``x -> scale*x + offset``.  Level-``n`` covers hold one closed
interval per word of length ``n``.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction

from .numeric import Interval, IntervalUnion, as_rational
from .rigorous import newhouse_lower

DEFAULT_MAX_INTERVALS = 10**6


class ExplosionError(RuntimeError):
    """Refinement would exceed the live-interval cap."""


def max_intervals() -> int:
    return int(os.environ.get("ABSHIFT_MAX_INTERVALS", DEFAULT_MAX_INTERVALS))


@dataclass(frozen=True)
class IfsSpec:
    beta: Fraction
    digit_lo: int
    digit_hi: int
    scale: Fraction = Fraction(1)
    offset: Fraction = Fraction(0)

    def __post_init__(self):
        beta = as_rational(self.beta)
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "scale", as_rational(self.scale))
        object.__setattr__(self, "offset", as_rational(self.offset))
        if self.digit_lo > self.digit_hi:
            raise ValueError("digit_lo > digit_hi")
        if self.branches < 2:
            raise ValueError("need at least two branches")
        if beta <= self.branches:
            raise ValueError(f"beta={beta} must exceed the branch count {self.branches}")
        if self.scale <= 0:
            raise ValueError("scale must be positive")

    @classmethod
    def laboratory(cls, beta, ell: int, scale=1, offset=0) -> "IfsSpec":
        """Digits ``1..ell-1``: expansions avoiding the two extreme symbols."""
        return cls(as_rational(beta), 1, ell - 1, as_rational(scale), as_rational(offset))

    @property
    def branches(self) -> int:
        return self.digit_hi - self.digit_lo + 1

    @property
    def digits(self) -> range:
        return range(self.digit_lo, self.digit_hi + 1)

    def raw_hull(self) -> Interval:
        return Interval(self.digit_lo / (self.beta - 1), self.digit_hi / (self.beta - 1))

    def hull(self) -> Interval:
        return self.raw_hull().affine(self.scale, self.offset)

    def post(self, x: Fraction) -> Fraction:
        return self.scale * x + self.offset

    def word_value(self, word) -> Fraction:
        """``sum(w_k / beta**k)`` for a finite word, before the affine map."""
        total, r = Fraction(0), Fraction(1)
        for d in word:
            r /= self.beta
            total += d * r
        return total

    def cylinder(self, word) -> Interval:
        """Image of the hull under ``f_{w_1} o ... o f_{w_n}``, then the affine map."""
        h = self.raw_hull()
        base, r = self.word_value(word), self.beta ** -len(word)
        return Interval(base + h.lo * r, base + h.hi * r).affine(self.scale, self.offset)

    def cylinder_width(self, level: int) -> Fraction:
        return self.scale * self.raw_hull().length * self.beta**-level

    def child_gap(self) -> Fraction:
        """Length of the level-1 gaps."""
        return self.scale * (1 / self.beta - self.raw_hull().length / self.beta)


class _IntegerCoder:
    """Cylinder endpoints at one level as integers over a shared denominator.

    Word values are tracked as numerators ``N`` over ``p**level`` where
    ``beta = p/q``; appending digit ``j`` at level ``k`` maps ``N`` to
    ``N*p + j*q**k``.
    """

    def __init__(self, spec: IfsSpec, level: int):
        p, q = spec.beta.numerator, spec.beta.denominator
        h = spec.raw_hull()
        s_n, s_d = spec.scale.numerator, spec.scale.denominator
        o_n, o_d = spec.offset.numerator, spec.offset.denominator
        hd = math.lcm(h.lo.denominator, h.hi.denominator)
        den_x = p**level * hd
        self.mul = s_n * o_d * hd
        self.lo_add = s_n * o_d * h.lo.numerator * (hd // h.lo.denominator) * q**level
        self.hi_add = s_n * o_d * h.hi.numerator * (hd // h.hi.denominator) * q**level
        self.lo_add += o_n * s_d * den_x
        self.hi_add += o_n * s_d * den_x
        self.den = den_x * s_d * o_d

    def lo(self, n: int) -> int:
        return self.mul * n + self.lo_add

    def hi(self, n: int) -> int:
        return self.mul * n + self.hi_add


def _child_numerators(spec: IfsSpec, nums, level: int) -> list[int]:
    p, step = spec.beta.numerator, spec.beta.denominator**level
    return [a * p + j * step for a in nums for j in spec.digits]


def lambda_approx(spec: IfsSpec, n: int) -> IntervalUnion:
    """Level-``n`` cylinder cover, ``branches**n`` intervals in increasing order."""
    if n < 0:
        raise ValueError("level must be non-negative")
    count = spec.branches**n
    if count > max_intervals():
        raise ExplosionError(f"{count} intervals exceed cap {max_intervals()}")
    nums = [0]
    for k in range(1, n + 1):
        nums = _child_numerators(spec, nums, k)
    coder = _IntegerCoder(spec, n)
    return IntervalUnion.from_integers(coder.den, [coder.lo(a) for a in nums], [coder.hi(a) for a in nums])


def gaps(u: IntervalUnion, hull: Interval | None = None) -> list[Interval]:
    """Bounded complementary intervals, reported by their closed endpoints."""
    if hull is not None and u and not hull.contains_interval(u.hull):
        raise ValueError("union not inside the given hull")
    return [Interval(a.hi, b.lo) for a, b in zip(u.parts, u.parts[1:])]


@dataclass(frozen=True)
class ThicknessReport:
    tau: Fraction
    minimizing_gap: Interval
    minimizing_bridge: Interval
    level: int | None = None

    def to_dict(self) -> dict:
        from .numeric import format_rational as f

        return {
            "tau": f(self.tau),
            "gap": [f(self.minimizing_gap.lo), f(self.minimizing_gap.hi)],
            "bridge": [f(self.minimizing_bridge.lo), f(self.minimizing_bridge.hi)],
            "level": self.level,
        }


def _reach(gap_len: list[int], order) -> list[int]:
    """For each gap, the nearest gap (in ``order``) at least as long, or -1."""
    out = [-1] * len(gap_len)
    stack: list[int] = []
    for i in order:
        while stack and gap_len[stack[-1]] < gap_len[i]:
            stack.pop()
        out[i] = stack[-1] if stack else -1
        stack.append(i)
    return out


def thickness(u: IntervalUnion, level: int | None = None) -> ThicknessReport:
    """Palis-Takens thickness of a finite union.

    At each endpoint ``x`` of a bounded gap ``G`` the bridge runs from ``x``
    outwards up to the first gap of length ``>= |G|`` (or the end of the
    union).  The minimum of ``|bridge| / |G|`` over all such endpoints is
    returned exactly, with the first minimiser from the left.
    """
    k = len(u)
    if k < 2:
        raise ValueError("thickness needs at least two parts")
    den, los, his = u.integer_form()
    g = [los[i + 1] - his[i] for i in range(k - 1)]
    left_block = _reach(g, range(k - 1))
    right_block = _reach(g, range(k - 2, -1, -1))
    best = None
    for i in range(k - 1):
        # gap i lies between part i and part i+1
        lb = left_block[i]
        start = los[lb + 1] if lb >= 0 else los[0]
        rb = right_block[i]
        end = his[rb] if rb >= 0 else his[-1]
        for bridge_lo, bridge_hi in ((start, his[i]), (los[i + 1], end)):
            width = bridge_hi - bridge_lo
            # compare width/g[i] against the best ratio by cross-multiplication
            if best is None or width * best[1] < best[0] * g[i]:
                best = (width, g[i], i, bridge_lo, bridge_hi)
    width, gap_len, i, blo, bhi = best
    gap = Interval(Fraction(his[i], den), Fraction(los[i + 1], den))
    bridge = Interval(Fraction(blo, den), Fraction(bhi, den))
    return ThicknessReport(Fraction(width, gap_len), gap, bridge, level)


def laboratory_thickness(beta, ell: int) -> Fraction:
    """Closed form ``(ell-2)/(beta+1-ell)`` for the digit set ``1..ell-1``."""
    beta = as_rational(beta)
    return Fraction(ell - 2) / (beta + 1 - ell)


def paper_thickness_formula(beta, ell: int | None = None) -> Fraction:
    """``(floor(beta)-1) / (1 - floor(beta) + beta)``, the ratio of inner to outer branch lengths.

    ``ell`` is accepted for symmetry with the chain bound and not used.
    """
    beta = as_rational(beta)
    if beta <= 1:
        raise ValueError("beta must exceed 1")
    fb = math.floor(beta)
    return Fraction(fb - 1) / (1 - fb + beta)


def chain_bound(ell: int) -> Fraction:
    """``(ell-2)/2``, the stratum-wide lower bound for the thickness."""
    return Fraction(ell - 2, 2)


def newhouse_bound(tau) -> Fraction:
    """Exact rational lower bound for ``log 2 / log(2 + 1/tau)``."""
    return newhouse_lower(as_rational(tau))


def _complement_closures(u: IntervalUnion):
    parts = u.parts
    yield None, parts[0].lo
    for a, b in zip(parts, parts[1:]):
        yield a.hi, b.lo
    yield parts[-1].hi, None


def _inside_closure(h: Interval, lo, hi) -> bool:
    return (lo is None or h.lo >= lo) and (hi is None or h.hi <= hi)


def interleaved(a: IntervalUnion, b: IntervalUnion) -> bool:
    """Neither union lies in the closure of one complementary component of the other."""
    if not a or not b:
        return False
    for x, y in ((a, b), (b, a)):
        h = x.hull
        if any(_inside_closure(h, lo, hi) for lo, hi in _complement_closures(y)):
            return False
    return True


def gap_lemma_test(tau_a, tau_b) -> bool:
    tau_a, tau_b = as_rational(tau_a), as_rational(tau_b)
    if tau_a <= 0 or tau_b <= 0:
        raise ValueError("thicknesses must be positive")
    return tau_a * tau_b > 1


@dataclass(frozen=True)
class RefineResult:
    union: IntervalUnion
    pairs: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]
    depth: int

    def __bool__(self):
        return bool(self.pairs)


def intersect_refine(a: IfsSpec, b: IfsSpec, depth: int, cap: int | None = None) -> RefineResult:
    """Branch-and-prune over pairs of cylinders whose intervals meet.

    Level by level, only pairs ``(w_a, w_b)`` with overlapping closed
    cylinders are refined.  Returns the union of the pairwise overlaps at the
    final depth together with the surviving word pairs, sorted by position.
    """
    if depth < 1:
        raise ValueError("depth must be positive")
    cap = max_intervals() if cap is None else cap
    # live entries: (word_a, numerator_a, word_b, numerator_b)
    live = [((), 0, (), 0)] if a.hull().overlaps(b.hull()) else []
    for level in range(1, depth + 1):
        ca, cb = _IntegerCoder(a, level), _IntegerCoder(b, level)
        da, db = ca.den, cb.den
        nxt = []
        for wa, na, wb, nb in live:
            kids_a = [(wa + (j,), m) for j, m in zip(a.digits, _child_numerators(a, [na], level))]
            kids_b = [(wb + (j,), m) for j, m in zip(b.digits, _child_numerators(b, [nb], level))]
            # both child lists are sorted and disjoint: sweep for overlaps
            i = 0
            for w1, m1 in kids_a:
                lo1, hi1 = ca.lo(m1) * db, ca.hi(m1) * db
                while i < len(kids_b) and cb.hi(kids_b[i][1]) * da < lo1:
                    i += 1
                k = i
                while k < len(kids_b) and cb.lo(kids_b[k][1]) * da <= hi1:
                    nxt.append((w1, m1, kids_b[k][0], kids_b[k][1]))
                    k += 1
            if len(nxt) > cap:
                raise ExplosionError(f"more than {cap} live pairs at level {level}")
        live = nxt
        if not live:
            break
    overlaps = []
    for wa, na, wb, nb in live:
        lo = max(Fraction(ca.lo(na), da), Fraction(cb.lo(nb), db))
        hi = min(Fraction(ca.hi(na), da), Fraction(cb.hi(nb), db))
        overlaps.append((Interval(lo, hi), wa, wb))
    overlaps.sort(key=lambda t: (t[0].lo, t[0].hi, t[1], t[2]))
    return RefineResult(
        IntervalUnion(iv for iv, _, _ in overlaps),
        tuple((wa, wb) for _, wa, wb in overlaps),
        depth,
    )

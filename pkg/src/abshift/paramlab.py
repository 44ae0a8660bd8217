"""Parameter sets whose shifts have specification, and the dimension estimate.

For fixed ``beta`` and stratum ``ell`` two Cantor sets of ``alpha`` values are
built from expansions with digits ``1..ell-1``:

* ``R``: ``alpha = (beta-1)/beta * x0(omega)``, where the orbit of 0 lands on
  the point coded by ``omega`` after one step;
* ``S``: ``alpha = (beta-1)/beta * (x0(omega) + 1 - beta + floor(beta))``, where
  the left limit at 1 lands on the point coded by ``omega``.

Here ``x0(omega) = sum(omega_n / beta**n)``.  Membership in ``R`` keeps the
orbit of 0 away from both ends of the interval, so ``K(u)`` is empty; membership
in ``S`` does the same for the left-limit orbit and ``K(v)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

import sympy

from .cantor import (
    IfsSpec,
    gap_lemma_test,
    interleaved,
    intersect_refine,
    lambda_approx,
    laboratory_thickness,
)
from .dynamics import (
    ParameterError,
    Params,
    coding,
    left_limit_coding,
    point_of,
)
from .numeric import Interval, as_rational, eventually_periodic_value, format_rational
from .rigorous import fiber_lower, newhouse_sqrt_lower
from .shiftspace import KReport, alphabet_certificate, k_sets
from .symbols import SymbolSeq


class NoWitness(RuntimeError):
    """Refinement found no overlapping pair of cylinders."""

    def __init__(self, message: str, diagnostics: dict):
        super().__init__(message)
        self.diagnostics = diagnostics


def default_ell(beta) -> int:
    """The stratum placing ``beta`` in ``(ell-1, ell]``."""
    return math.ceil(as_rational(beta))


def _check_window(beta: Fraction, ell: int):
    if not ell - 1 < beta < ell + 1:
        raise ParameterError(f"beta={beta} outside ({ell - 1}, {ell + 1})")


def e_ell_window(beta, ell: int) -> Interval:
    """Admissible ``alpha`` for ``floor(alpha+beta) == ell``: ``[lo, hi)``, ``hi`` excluded."""
    beta = as_rational(beta)
    _check_window(beta, ell)
    if beta <= ell:
        return Interval(ell - beta, 1)
    return Interval(0, ell + 1 - beta)


def in_e_ell(alpha, beta, ell: int) -> bool:
    w = e_ell_window(beta, ell)
    return w.lo <= alpha < w.hi


def s_window(beta, ell: int) -> Interval:
    """``[1 - beta + floor(beta), min(ell + 1 - beta, 1))``, upper end excluded."""
    beta = as_rational(beta)
    c = 1 - beta + math.floor(beta)
    return Interval(c, max(c, min(ell + 1 - beta, Fraction(1))))


class AlphaCandidate(NamedTuple):
    alpha: Fraction
    member: bool


def _check_digits(omega: SymbolSeq, ell: int):
    if not omega.is_infinite:
        raise ValueError("omega must be eventually periodic")
    digits = omega.preperiod + omega.period
    if any(not 1 <= d <= ell - 1 for d in digits):
        raise ValueError(f"digits of {omega} must lie in 1..{ell - 1}")


def r_alpha(beta, omega: SymbolSeq, ell: int | None = None) -> AlphaCandidate:
    beta = as_rational(beta)
    ell = default_ell(beta) if ell is None else ell
    _check_digits(omega, ell)
    alpha = (beta - 1) / beta * eventually_periodic_value(omega, beta)
    return AlphaCandidate(alpha, in_e_ell(alpha, beta, ell))


def s_alpha(beta, omega: SymbolSeq, ell: int | None = None) -> AlphaCandidate:
    beta = as_rational(beta)
    ell = default_ell(beta) if ell is None else ell
    _check_digits(omega, ell)
    c = 1 - beta + math.floor(beta)
    alpha = (beta - 1) / beta * (eventually_periodic_value(omega, beta) + c)
    w = s_window(beta, ell)
    return AlphaCandidate(alpha, w.lo <= alpha < w.hi)


def r_spec(beta, ell: int | None = None) -> IfsSpec:
    beta = as_rational(beta)
    ell = default_ell(beta) if ell is None else ell
    return IfsSpec.laboratory(beta, ell, (beta - 1) / beta, 0)


def s_spec(beta, ell: int | None = None) -> IfsSpec:
    beta = as_rational(beta)
    ell = default_ell(beta) if ell is None else ell
    scale = (beta - 1) / beta
    return IfsSpec.laboratory(beta, ell, scale, scale * (1 - beta + math.floor(beta)))


class EpsilonConditions(NamedTuple):
    lower_s: bool
    upper_s: bool
    r_inside: bool

    def all(self) -> bool:
        return self.lower_s and self.upper_s and self.r_inside


def epsilon_conditions(beta, ell: int) -> EpsilonConditions:
    """The three inequalities placing both parameter sets inside the window.

    * ``lower_s``: ``c <= (beta-1)/beta * (1/beta + c)``
    * ``upper_s``: ``(beta-1)/beta * (floor(beta)/beta + c) < 1``
    * ``r_inside``: ``ell - beta < (beta-1)/beta**2``

    with ``c = 1 - beta + floor(beta)``.
    """
    beta = as_rational(beta)
    if not ell - 1 < beta <= ell:
        raise ParameterError(f"beta={beta} outside ({ell - 1}, {ell}]")
    fb = math.floor(beta)
    c = 1 - beta + fb
    k = (beta - 1) / beta
    return EpsilonConditions(
        c <= k * (1 / beta + c),
        k * (Fraction(fb) / beta + c) < 1,
        ell - beta < k / beta,
    )


def _condition_polys(ell: int):
    """Each condition on ``(ell-1, ell)`` as ``P(b) > 0`` (or ``>= 0``), cleared of denominators."""
    b = sympy.Symbol("b", positive=True)
    c = ell - b  # floor(b) = ell - 1 on the open window
    k = (b - 1) / b
    exprs = [k * (1 / b + c) - c, 1 - k * ((ell - 1) / b + c), k / b - (ell - b)]
    return b, [sympy.Poly(sympy.numer(sympy.together(e)), b) for e in exprs]


def _largest_root_below(poly: sympy.Poly, lo: int, hi: int) -> Fraction | None:
    """Rational upper end of an isolating interval for the largest root in ``(lo, hi)``."""
    best = None
    for (a, b), _ in poly.intervals(eps=Fraction(1, 10**12)):
        a, b = Fraction(int(a.p), int(a.q)), Fraction(int(b.p), int(b.q))
        if b > lo and a < hi:
            best = b if best is None else max(best, b)
    return best


def max_epsilon(ell: int) -> Fraction:
    """A rational ``eps`` such that all three conditions hold for ``beta`` in ``(ell-eps, ell)``.

    Each condition is a polynomial sign condition; real roots in
    ``(ell-1, ell)`` are isolated exactly and ``eps`` stops short of the
    largest one.  The result is certified by a root count on the final
    window and a sign evaluation inside it.
    """
    if ell < 3:
        raise ValueError("ell must be at least 3")
    b, polys = _condition_polys(ell)
    eps = Fraction(1)
    for poly in polys:
        root = _largest_root_below(poly, ell - 1, ell)
        if root is not None:
            eps = min(eps, ell - root)
    if not _certify_epsilon(ell, eps, polys):
        raise ArithmeticError(f"epsilon {eps} failed certification")
    return eps


def _certify_epsilon(ell: int, eps: Fraction, polys) -> bool:
    lo = sympy.Rational(ell * eps.denominator - eps.numerator, eps.denominator)
    for poly in polys:
        on_ends = (poly.eval(lo) == 0) + (poly.eval(ell) == 0)
        if poly.count_roots(lo, ell) - on_ends != 0:
            return False
    mid = ell - eps / 2
    return epsilon_conditions(mid, ell).all()


class WitnessChecks(NamedTuple):
    r_identity: Fraction | None
    r_orbit: bool | None
    s_identity: Fraction | None
    s_floor: bool | None
    s_orbit: bool | None


@dataclass
class WitnessReport:
    """A parameter with its critical sequences and K-set certificates.

    ``alpha`` is exact, or a chain of nested enclosures when the witness is
    only located by refinement.  ``checks`` carries exact residuals of the
    defining identities (zero when they hold).
    """

    alpha: Fraction | list[Interval]
    beta: Fraction
    ell: int
    omega_r: SymbolSeq | None
    omega_s: SymbolSeq | None
    u: SymbolSeq | None
    v: SymbolSeq | None
    k_u: KReport | None
    k_v: KReport | None
    certified: bool
    checks: WitnessChecks | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def exact(self) -> bool:
        return isinstance(self.alpha, Fraction)

    def to_dict(self) -> dict:
        f = format_rational
        alpha = (
            f(self.alpha)
            if self.exact
            else [[f(iv.lo), f(iv.hi)] for iv in self.alpha]
        )
        s = lambda x: None if x is None else str(x)  # noqa: E731
        return {
            "alpha": alpha,
            "beta": f(self.beta),
            "ell": self.ell,
            "omega_r": s(self.omega_r),
            "omega_s": s(self.omega_s),
            "u": s(self.u),
            "v": s(self.v),
            "k_u": None if self.k_u is None else self.k_u.to_dict(),
            "k_v": None if self.k_v is None else self.k_v.to_dict(),
            "certified": self.certified,
        }


def verify_witness(alpha, beta, omega_r: SymbolSeq | None, omega_s: SymbolSeq | None, n: int) -> WitnessReport:
    """Check a claimed witness exactly.

    R-side (``omega_r``): ``alpha == (beta-1)/beta * x0(omega_r)`` and the orbit
    of 0 is coded ``0 omega_r``.  S-side (``omega_s``): the left limit of the
    map at 1 equals the point coded by ``omega_s`` and ``v`` is coded
    ``ell omega_s``.  K-sets are then decided from the exact codings.
    """
    p = Params(alpha, beta)
    ell = p.ell
    notes = []
    depth = max(n, 1)
    u = coding(p, 0, 10 * depth + 50)
    v = left_limit_coding(p, 10 * depth + 50)

    r_identity = r_orbit = s_identity = s_floor = s_orbit = None
    if omega_r is not None:
        _check_digits(omega_r, ell)
        r_identity = p.alpha - (p.beta - 1) / p.beta * eventually_periodic_value(omega_r, p.beta)
        r_orbit = u.prefix(n) == omega_r.prepend((0,)).prefix(n)
        if r_identity:
            notes.append(f"R identity residual {r_identity}")
    if omega_s is not None:
        _check_digits(omega_s, ell)
        limit = p.beta + p.alpha - math.floor(p.beta + p.alpha)
        s_identity = point_of(p, omega_s) - limit
        s_floor = 1 + math.floor(p.beta) == math.floor(p.beta + p.alpha)
        s_orbit = v.prefix(n) == omega_s.prepend((ell,)).prefix(n)
        if s_identity:
            notes.append(f"S identity residual {s_identity}")

    k_u, k_v = k_sets(u, v, depth, 4 * depth) if _enough(u, v, depth) else (None, None)
    if u.is_infinite or v.is_infinite:
        empty_u, empty_v = alphabet_certificate(u, v)
        notes.append(f"alphabet certificate: K(u) empty={empty_u}, K(v) empty={empty_v}")
    certified = bool(k_u and k_v and k_u.certified_finite and k_v.certified_finite)
    if not certified:
        notes.append("partial: not both K-sets certified finite")
    checks = WitnessChecks(r_identity, r_orbit, s_identity, s_floor, s_orbit)
    return WitnessReport(p.alpha, p.beta, ell, omega_r, omega_s, u, v, k_u, k_v, certified, checks, notes)


def _enough(u: SymbolSeq, v: SymbolSeq, depth: int) -> bool:
    need = 5 * depth
    return all(s.is_infinite or len(s) >= need for s in (u, v))


def _periodic_readings(word: tuple[int, ...], max_period: int = 6):
    """Eventually periodic sequences consistent with ``word`` whose period repeats at least twice."""
    n = len(word)
    out = set()
    for per in range(1, max_period + 1):
        for pre in range(0, n - 2 * per + 1):
            tail = word[pre:]
            if all(tail[i] == tail[i % per] for i in range(len(tail))):
                out.add(SymbolSeq(word[:pre], word[pre : pre + per]))
                break
    return out


def find_witness(beta, depth: int, ell: int | None = None) -> WitnessReport:
    """Locate ``alpha`` in the intersection of the two parameter Cantor sets.

    Refines pairs of overlapping cylinders to ``depth`` and follows the
    leftmost surviving pair back through its ancestors, giving nested exact
    enclosures of a point of the intersection.  If both surviving words read
    as eventually periodic sequences giving the same ``alpha``, that exact
    value is verified and returned instead.
    """
    beta = as_rational(beta)
    ell = default_ell(beta) if ell is None else ell
    _check_window(beta, ell)
    if ell < 3:
        raise ParameterError(f"ell={ell} < 3: outside laboratory mode")
    if not beta < ell:
        raise ParameterError("the window endpoint beta == ell is excluded")
    conds = epsilon_conditions(beta, ell)
    if not conds.all():
        raise ParameterError(f"window conditions fail at beta={beta}: {conds}")
    ra, sa = r_spec(beta, ell), s_spec(beta, ell)
    diagnostics = _diagnostics(ra, sa, beta, ell)
    result = intersect_refine(ra, sa, depth)
    if not result:
        raise NoWitness(f"no overlapping cylinders at depth {depth}", diagnostics)
    wa, wb = result.pairs[0]
    chain = []
    for d in range(1, depth + 1):
        chain.append(ra.cylinder(wa[:d]).intersection(sa.cylinder(wb[:d])))

    for om_r in sorted(_periodic_readings(wa), key=str):
        a_r = r_alpha(beta, om_r, ell)
        for om_s in sorted(_periodic_readings(wb), key=str):
            a_s = s_alpha(beta, om_s, ell)
            if a_r.alpha == a_s.alpha and a_r.member and a_s.member:
                rep = verify_witness(a_r.alpha, beta, om_r, om_s, depth)
                rep.notes.append("exact alpha from periodic readings")
                return rep

    notes = [f"{k}={v}" for k, v in diagnostics.items()]
    notes.append(f"{len(result.pairs)} surviving pairs at depth {depth}")
    prefix_r = SymbolSeq.finite(wa)
    prefix_s = SymbolSeq.finite(wb)
    return WitnessReport(
        chain, beta, ell, prefix_r, prefix_s, None, None, None, None, False, None, notes
    )


def _diagnostics(ra: IfsSpec, sa: IfsSpec, beta: Fraction, ell: int) -> dict:
    tau = laboratory_thickness(beta, ell)
    level = 3 if ra.branches**3 <= 10**5 else 1
    return {
        "r_hull": str(ra.hull()),
        "s_hull": str(sa.hull()),
        "hulls_overlap": ra.hull().overlaps(sa.hull()),
        "interleaved": interleaved(lambda_approx(ra, level), lambda_approx(sa, level)),
        "gap_lemma": gap_lemma_test(tau, tau),
        "conditions": epsilon_conditions(beta, ell).all() if beta <= ell else None,
    }


def dim_fiber_bound(ell: int) -> Fraction:
    """Lower bound for ``log 2 / log(2 + sqrt(8/(ell-2)))``, rounded down."""
    if ell < 3:
        raise ValueError("ell must be at least 3")
    return fiber_lower(ell)


def dim_lower_bound(ell: int) -> Fraction:
    """Fiber bound plus one for the product with the ``beta`` direction."""
    return dim_fiber_bound(ell) + 1


def dim_lower_bound_at(tau) -> Fraction:
    """Newhouse bound at thickness ``sqrt(tau)/2`` (fiber dimension)."""
    return newhouse_sqrt_lower(as_rational(tau))

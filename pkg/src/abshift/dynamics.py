"""The (alpha, beta)-transformation ``x -> beta*x + alpha mod 1`` and its codings.

All orbits are computed in exact rational arithmetic.  The orbit of a
rational point under rational parameters stays rational, so whenever a state
repeats the coding is returned as an exact eventually periodic
:class:`~abshift.symbols.SymbolSeq`.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction

from .numeric import as_rational, eventually_periodic_value
from .symbols import SymbolSeq

DEFAULT_MAX_STATES = 10**6


class ParameterError(ValueError):
    """Parameters outside the supported domain."""


@dataclass(frozen=True)
class Params:
    """A point ``(alpha, beta)`` of the parameter space, ``0 <= alpha < 1 < beta``.

    ``ell = floor(alpha + beta)`` is the largest digit; the pair lies in the
    stratum of parameters sharing that alphabet ``{0, ..., ell}``.
    """

    alpha: Fraction
    beta: Fraction

    def __post_init__(self):
        alpha, beta = as_rational(self.alpha), as_rational(self.beta)
        if not 0 <= alpha < 1:
            raise ParameterError(f"alpha={alpha} outside [0, 1)")
        if beta <= 1:
            raise ParameterError(f"beta={beta} must exceed 1")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)

    @property
    def ell(self) -> int:
        return math.floor(self.alpha + self.beta)

    def require_laboratory(self) -> "Params":
        """Refuse strata with fewer than four symbols (``ell < 3``)."""
        if self.ell < 3:
            raise ParameterError(f"laboratory mode needs ell >= 3, got ell={self.ell}")
        if not self.ell - 1 < self.beta < self.ell + 1:
            raise ParameterError("beta outside (ell-1, ell+1)")
        return self

    def __str__(self):
        return f"alpha={self.alpha}, beta={self.beta}, ell={self.ell}"


def _check_unit(x: Fraction) -> Fraction:
    x = as_rational(x)
    if not 0 <= x < 1:
        raise ValueError(f"x={x} outside [0, 1)")
    return x


def digit(p: Params, x) -> int:
    x = _check_unit(x)
    return math.floor(p.beta * x + p.alpha)


def step(p: Params, x) -> tuple[int, Fraction]:
    x = _check_unit(x)
    y = p.beta * x + p.alpha
    d = math.floor(y)
    return d, y - d


def _left_step(p: Params, y: Fraction) -> tuple[int, Fraction]:
    # digit of points just below y: a value landing exactly on an integer
    # is coded by the lower branch, leaving the state at 1
    t = p.beta * y + p.alpha
    d = math.ceil(t) - 1
    return d, t - d


def _max_states() -> int:
    return int(os.environ.get("ABSHIFT_MAX_STATES", DEFAULT_MAX_STATES))


def _code(start: Fraction, stepper, n: int, max_states: int | None) -> SymbolSeq:
    cap = _max_states() if max_states is None else max_states
    seen: dict[Fraction, int] = {}
    digits: list[int] = []
    state = start
    for k in range(n):
        if k < cap:
            first = seen.setdefault(state, k)
            if first != k:
                return SymbolSeq(digits[:first], digits[first:])
        d, state = stepper(state)
        digits.append(d)
    if n <= cap and state in seen:
        first = seen[state]
        return SymbolSeq(digits[:first], digits[first:])
    return SymbolSeq.finite(digits)


def coding(p: Params, x, n: int, max_states: int | None = None) -> SymbolSeq:
    """Coding of ``x``: eventually periodic if the orbit closes within ``n`` steps.

    Otherwise the first ``n`` digits are returned as a finite prefix.
    """
    x = _check_unit(x)
    return _code(x, lambda s: step(p, s), n, max_states)


def itinerary(p: Params, x, n: int) -> SymbolSeq:
    """First ``n`` digits of the coding of ``x`` as a finite prefix."""
    if n < 1:
        raise ValueError("n must be positive")
    return SymbolSeq.finite(coding(p, x, n).prefix(n))


def left_limit_coding(p: Params, n: int, max_states: int | None = None) -> SymbolSeq:
    """Coding of the virtual orbit of ``1^-`` (state kept in ``(0, 1]``)."""
    return _code(Fraction(1), lambda s: _left_step(p, s), n, max_states)


def left_limit_critical(p: Params, n: int) -> SymbolSeq:
    if n < 1:
        raise ValueError("n must be positive")
    return SymbolSeq.finite(left_limit_coding(p, n).prefix(n))


def zero_critical(p: Params, n: int) -> SymbolSeq:
    return itinerary(p, 0, n)


def left_limit_orbit(p: Params, n: int) -> list[Fraction]:
    """States ``y_0 = 1, y_1, ..., y_n`` of the left-limit orbit."""
    ys = [Fraction(1)]
    for _ in range(n):
        ys.append(_left_step(p, ys[-1])[1])
    return ys


def expansion_partial_sums(p: Params, digits) -> list[Fraction]:
    """All partial sums ``S_1, ..., S_n`` of ``sum((e_k - alpha) / beta**k)``.

    Runs Horner's scheme on integers over the common denominator
    ``b * P**k`` (``alpha = a/b``, ``beta = P/Q``), so the whole list costs
    one pass.
    """
    digits = digits.prefix(len(digits)) if isinstance(digits, SymbolSeq) else tuple(digits)
    if not digits:
        raise ValueError("need at least one digit")
    a, b = p.alpha.numerator, p.alpha.denominator
    P, Q = p.beta.numerator, p.beta.denominator
    num, den, qk = 0, b, 1
    out = []
    for d in digits:
        qk *= Q
        den *= P
        num = num * P + (d * b - a) * qk
        out.append(Fraction(num, den))
    return out


def expansion_partial_sum(p: Params, digits) -> Fraction:
    """``S_n = sum((e_k - alpha) / beta**k)`` over the given digits."""
    return expansion_partial_sums(p, digits)[-1]


def point_of(p: Params, omega: SymbolSeq) -> Fraction:
    """The point whose expansion digits are ``omega``: ``x_0(omega) - alpha/(beta-1)``."""
    return eventually_periodic_value(omega, p.beta) - p.alpha / (p.beta - 1)


def digit_cut(p: Params, j: int) -> Fraction:
    """Left end ``(j - alpha)/beta`` of the branch interval of digit ``j >= 1``."""
    return (j - p.alpha) / p.beta

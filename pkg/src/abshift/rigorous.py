"""Directed-rounding evaluation of the logarithmic dimension bounds.

Values are enclosed with mpmath interval arithmetic and the lower end of the
enclosure is returned as an exact :class:`~fractions.Fraction`, so every
reported number is a valid lower bound for the real quantity.
"""

from __future__ import annotations

from contextlib import contextmanager
from decimal import Decimal
from fractions import Fraction

from mpmath import iv
from mpmath.libmp import to_rational

WORKING_DPS = 60


def _iv(q: Fraction):
    q = Fraction(q)
    return iv.mpf(q.numerator) / iv.mpf(q.denominator)


@contextmanager
def _precision():
    saved = iv.dps
    iv.dps = WORKING_DPS
    try:
        yield
    finally:
        iv.dps = saved


def _lower(x) -> Fraction:
    p, q = to_rational(x._mpi_[0])
    return Fraction(int(p), int(q))


def newhouse_lower(tau: Fraction) -> Fraction:
    """Lower bound for ``log 2 / log(2 + 1/tau)``."""
    tau = Fraction(tau)
    if tau <= 0:
        raise ValueError("thickness must be positive")
    with _precision():
        return _lower(iv.log(iv.mpf(2)) / iv.log(2 + 1 / _iv(tau)))


def newhouse_sqrt_lower(tau: Fraction) -> Fraction:
    """Lower bound for the Newhouse value at thickness ``sqrt(tau) / 2``."""
    tau = Fraction(tau)
    if tau <= 0:
        raise ValueError("thickness must be positive")
    with _precision():
        return _lower(iv.log(iv.mpf(2)) / iv.log(2 + 2 / iv.sqrt(_iv(tau))))


def fiber_lower(ell: int) -> Fraction:
    """Lower bound for ``log 2 / log(2 + sqrt(8/(ell-2)))``."""
    if ell < 3:
        raise ValueError("ell must be at least 3")
    with _precision():
        root = iv.sqrt(iv.mpf(8) / iv.mpf(ell - 2))
        return _lower(iv.log(iv.mpf(2)) / iv.log(2 + root))


def decimal_floor(q: Fraction, digits: int = 30) -> str:
    """``q`` rounded toward minus infinity to ``digits`` significant digits."""
    q = Fraction(q)
    if q == 0:
        return "0"
    exp10 = len(str(abs(q.numerator) // q.denominator)) if abs(q) >= 1 else 0
    if abs(q) < 1:
        # count leading zeros after the point
        t, exp10 = abs(q), 0
        while t < Fraction(1, 10):
            t *= 10
            exp10 -= 1
    scale = digits - exp10
    scaled = q * Fraction(10) ** scale
    n = scaled.numerator // scaled.denominator
    return str(Decimal(f"{n}E{-scale}"))

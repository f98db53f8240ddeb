"""Exact integer/rational arithmetic and the combinatorial primitives used everywhere.

Python's ``int`` and ``fractions.Fraction`` already give arbitrary precision and
lowest-terms rationals, so they serve directly as the big-integer and big-rational
types. Decimals are produced from exact rationals only at the rendering step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import ROUND_CEILING, ROUND_HALF_EVEN, Context, Decimal, localcontext
from fractions import Fraction

DEFAULT_PRECISION = 50

BigUInt = int
BigRational = Fraction


def factorial(n: int) -> int:
    if n < 0:
        raise ValueError(f"factorial needs n >= 0, got {n}")
    return math.factorial(n)


def double_factorial_odd(n: int) -> int:
    """Return (2n-1)!! = 1*3*...*(2n-1), with (-1)!! = 1 for n = 0."""
    if n < 0:
        raise ValueError(f"double_factorial_odd needs n >= 0, got {n}")
    out = 1
    for k in range(3, 2 * n, 2):
        out *= k
    return out


def binomial(n: int, k: int) -> int:
    """C(n, k), taken as 0 when k < 0 or k > n."""
    if k < 0 or n < 0 or k > n:
        return 0
    return math.comb(n, k)


def falling(n: int, k: int) -> int:
    """n (n-1) ... (n-k+1)."""
    return math.perm(n, k) if 0 <= k <= n else 0


def context(precision: int = DEFAULT_PRECISION, rounding: str = ROUND_HALF_EVEN) -> Context:
    return Context(prec=precision, rounding=rounding)


def to_decimal(q: Fraction | int, precision: int = DEFAULT_PRECISION, rounding: str = ROUND_HALF_EVEN) -> Decimal:
    """Round an exact rational to ``precision`` significant digits."""
    q = Fraction(q)
    ctx = context(precision, rounding)
    return ctx.divide(Decimal(q.numerator), Decimal(q.denominator))


def exp_decimal(x: Fraction | int, precision: int = DEFAULT_PRECISION) -> Decimal:
    """e**x correctly rounded to ``precision`` digits (x an exact rational)."""
    with localcontext(context(precision + 10)):
        arg = Decimal(Fraction(x).numerator) / Decimal(Fraction(x).denominator)
        val = arg.exp()
    return context(precision).plus(val)


# Rational upper bound for e, used where a certified bound must not depend on rounding.
E_UPPER = Fraction(2719, 1000)


@dataclass(frozen=True)
class BoundedDecimal:
    """A decimal value together with an upper bound on its distance to the true value."""

    value: Decimal
    error: Decimal = Decimal(0)
    precision: int = DEFAULT_PRECISION

    @classmethod
    def from_fraction(cls, q: Fraction, error: Fraction = Fraction(0),
                      precision: int = DEFAULT_PRECISION) -> "BoundedDecimal":
        # error is rounded up so it stays an upper bound after rendering
        return cls(to_decimal(q, precision), to_decimal(error, precision, ROUND_CEILING), precision)

    def contains(self, x: Decimal) -> bool:
        return abs(self.value - x) <= self.error

from decimal import Decimal, localcontext
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from derange.bigmath import (BoundedDecimal, binomial, double_factorial_odd, exp_decimal, factorial,
                             to_decimal)


@pytest.mark.parametrize("n,expected", [(0, 1), (5, 120), (10, 3628800)])
def test_factorial(n, expected):
    assert factorial(n) == expected


@pytest.mark.parametrize("n,expected", [(0, 1), (1, 1), (3, 15)])
def test_double_factorial_odd(n, expected):
    assert double_factorial_odd(n) == expected


@pytest.mark.parametrize("n,k,expected", [(4, 2, 6), (2, 1, 2), (5, -1, 0), (3, 4, 0)])
def test_binomial(n, k, expected):
    assert binomial(n, k) == expected


def test_negative_arguments_rejected():
    with pytest.raises(ValueError):
        factorial(-1)
    with pytest.raises(ValueError):
        double_factorial_odd(-1)


def test_double_factorial_identity_to_200():
    for n in range(201):
        assert double_factorial_odd(n) * 2**n * factorial(n) == factorial(2 * n)


def test_pascal_to_100():
    for n in range(1, 101):
        for k in range(1, n + 1):
            assert binomial(n, k) == binomial(n - 1, k) + binomial(n - 1, k - 1)


@given(st.integers(-10**30, 10**30), st.integers(1, 10**30))
def test_rational_reduces_and_inverts(p, q):
    if p == 0:
        return
    x = Fraction(p, q)
    assert x * Fraction(q, p) == 1
    assert x.denominator > 0


def test_exp_decimal_matches_known_digits():
    # e^-1 to 30 places
    assert str(exp_decimal(-1, 30)) == "0.367879441171442321595523770161"


def test_exp_decimal_rational_argument():
    a = exp_decimal(Fraction(-3, 4), 60)
    b = exp_decimal(Fraction(-1, 4), 70)
    with localcontext() as ctx:
        ctx.prec = 70
        assert abs(a - b * b * b) < Decimal("1e-55")


def test_to_decimal_precision():
    assert to_decimal(Fraction(1, 3), 20) == Decimal("0.33333333333333333333")


def test_bounded_decimal_contains():
    b = BoundedDecimal.from_fraction(Fraction(1, 3), Fraction(1, 10**6), 30)
    assert b.contains(Decimal("0.3333336"))
    assert not b.contains(Decimal("0.3334"))

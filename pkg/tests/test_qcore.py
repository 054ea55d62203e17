from fractions import Fraction as F
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from qverify.qcore import (
    ZeroDenominator,
    catalan,
    poch_fraction,
    pochhammer,
    shapiro_check,
)

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)
nonzero = rationals.filter(lambda v: v != 0)


@pytest.mark.parametrize(
    "x, base, count, expected",
    [
        (F(7, 3), F(9), 0, F(1)),
        (F(1, 2), F(1, 2), 2, F(3, 8)),  # (1 - 1/2)(1 - 1/4)
        (F(1), F(5), 3, F(0)),
    ],
)
def test_pochhammer_examples(x, base, count, expected):
    assert pochhammer(x, base, count) == expected


def test_pochhammer_rejects_negative_count():
    with pytest.raises(ValueError):
        pochhammer(F(1, 2), F(2), -1)


def test_pochhammer_rejects_float():
    with pytest.raises(TypeError):
        pochhammer(0.5, F(2), 1)


def test_poch_fraction_examples():
    assert poch_fraction([F(1, 2)], [F(1, 3)], F(1, 2), 0) == 1
    assert poch_fraction([F(1, 2)], [F(1, 3)], F(1, 2), 1) == F(3, 4)
    with pytest.raises(ZeroDenominator):
        poch_fraction([F(2)], [F(1)], F(3), 1)


def test_results_are_canonical():
    v = poch_fraction([F(2, 4)], [F(-6, 9)], F(1, 3), 3)
    assert v.denominator > 0
    assert F(v.numerator, v.denominator) == v


@settings(max_examples=200)
@given(rationals, nonzero, st.integers(0, 6), st.integers(0, 6))
def test_pochhammer_splits(x, base, m, r):
    whole = pochhammer(x, base, m + r)
    assert whole == pochhammer(x, base, m) * pochhammer(x * base**m, base, r)


@settings(max_examples=200)
@given(nonzero, st.integers(0, 5), st.integers(1, 6))
def test_pochhammer_zero_exactly_at_inverse_powers(base, i, count):
    x = base**-i
    assert (pochhammer(x, base, count) == 0) == any(x * base**j == 1 for j in range(count))
    if i < count:
        assert pochhammer(x, base, count) == 0


def _dyck_count(n):
    """Independent oracle: count balanced bracket words of length 2n."""
    total = 0
    for word in product((1, -1), repeat=2 * n):
        height = 0
        for step in word:
            height += step
            if height < 0:
                break
        else:
            total += height == 0
    return total


@pytest.mark.parametrize("n", range(8))
def test_catalan_matches_dyck_enumeration(n):
    assert catalan(n) == _dyck_count(n)


@pytest.mark.parametrize("n, expected", [(0, 1), (2, 2), (4, 14)])
def test_catalan_examples(n, expected):
    assert catalan(n) == expected


def test_catalan_recurrence():
    for n in range(21):
        assert catalan(n + 1) == sum(catalan(i) * catalan(n - i) for i in range(n + 1))


def test_shapiro_examples():
    assert shapiro_check(0) == (True, 1, 1)
    assert shapiro_check(2) == (True, 32, 32)
    # n = 5 by direct convolution of recurrence-built Catalan numbers
    cat = [1]
    for m in range(10):
        cat.append(sum(cat[i] * cat[m - i] for i in range(m + 1)))
    conv = sum(cat[2 * k] * cat[10 - 2 * k] for k in range(6))
    assert shapiro_check(5) == (True, conv, 4**5 * cat[5])


def test_shapiro_range():
    assert all(shapiro_check(n)[0] for n in range(31))

from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from qverify.params import (
    AffineExp,
    MissingVariable,
    Mono,
    Point,
    ZeroCoefficient,
    eval_mono,
    mono_inv,
    mono_mul,
    mono_pow,
)

ONE = Mono()


def test_identity_mono_is_one():
    assert eval_mono(ONE, Point(F(7, 3), 4, 0, {"a": 5})) == 1


def test_eval_mono_half_integer_power():
    m = Mono(1, AffineExp(1, -2), {"a": -1, "b": -1})  # q^(1/2-n)/(ab)
    assert eval_mono(m, Point(2, 1, 0, {"a": 3, "b": 5})) == F(1, 30)


def test_eval_mono_negative_coefficient():
    assert eval_mono(Mono(-1, AffineExp(1)), Point(2)) == -2


def test_eval_mono_missing_variable():
    with pytest.raises(MissingVariable):
        eval_mono(Mono(1, 0, {"x": 1}), Point(2, 0, 0, {"a": 1}))


def test_eval_mono_k_dependence():
    m = Mono(1, AffineExp(0, -2, 2))  # q^(k-n)
    assert eval_mono(m, Point(3, 2, 1)) == F(1, 9)


def test_mul_and_inverse():
    m = Mono(F(-2, 3), AffineExp(3, -2, 1), {"a": 2, "b": -1})
    assert mono_mul(m, ONE) == m
    assert mono_mul(m, mono_inv(m)) == ONE


def test_mul_exponent_addition():
    m1 = Mono(1, AffineExp(1), {"a": 1, "b": 1})  # q^(1/2)ab
    m2 = Mono(1, AffineExp(0, -2), {"b": -1})  # q^(-n)/b
    assert mono_mul(m1, m2) == Mono(1, AffineExp(1, -2), {"a": 1})


def test_inverse_of_zero_coefficient():
    with pytest.raises(ZeroCoefficient):
        mono_inv(Mono(0))


def test_point_invariants():
    with pytest.raises(ValueError):
        Point(1).check()
    with pytest.raises(ValueError):
        Point(2, 0, 0, {"a": 0}).check()
    with pytest.raises(ValueError):
        Point(2, -1)
    assert Point("3/2", 1, 0, {"a": "1/2"}).q == F(9, 4)


small = st.fractions(min_value=-9, max_value=9, max_denominator=9).filter(
    lambda v: v not in (0, 1, -1)
)
exps = st.integers(-4, 4)
monos = st.builds(
    lambda c, e0, en, ek, ea, eb: Mono(c, AffineExp(e0, en, ek), {"a": ea, "b": eb}),
    small, exps, exps, exps, exps, exps,
)
points = st.builds(
    lambda p, n, k, a, b: Point(p, n, k, {"a": a, "b": b}),
    small, st.integers(0, 5), st.integers(0, 5), small, small,
)


@given(monos, monos, points)
def test_eval_is_multiplicative(m1, m2, pt):
    assert eval_mono(mono_mul(m1, m2), pt) == eval_mono(m1, pt) * eval_mono(m2, pt)


@given(monos, points)
def test_eval_respects_inverse(m, pt):
    assert eval_mono(mono_inv(m), pt) == 1 / eval_mono(m, pt)


@given(monos, st.integers(-3, 3), points)
def test_eval_respects_power(m, e, pt):
    assert eval_mono(mono_pow(m, e), pt) == eval_mono(m, pt) ** e

"""Exact rational arithmetic, q-shifted factorials and Catalan numbers.

All scalars are :class:`fractions.Fraction` values, which are kept in
lowest terms with a positive denominator after every operation, so
equality of two results is plain structural equality.
"""

from fractions import Fraction
from math import comb

Rat = Fraction


class ZeroDenominator(ArithmeticError):
    """A denominator factor vanished: the evaluation point sits on a pole.

    ``k`` is the summation index (if any), ``factor`` a short label for the
    vanishing factor and ``path`` the location inside an expression tree.
    """

    def __init__(self, message="zero denominator", *, k=None, factor=None, path=None):
        super().__init__(message)
        self.k = k
        self.factor = factor
        self.path = path

    def where(self):
        parts = []
        if self.path:
            parts.append(self.path)
        if self.k is not None:
            parts.append(f"k={self.k}")
        if self.factor is not None:
            parts.append(str(self.factor))
        return " ".join(parts) or str(self)


def as_rat(value):
    """Coerce ints, strings like ``"3/2"`` and Fractions to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("floats are not accepted; pass an int, str or Fraction")
    return Fraction(value)


def divide(num, den, **where):
    if den == 0:
        raise ZeroDenominator("division by zero", **where)
    return Fraction(num) / den


def poch_factor(x, base, i):
    """The i-th factor ``1 - x*base**i`` of a q-shifted factorial."""
    return 1 - x * base**i


def pochhammer(x, base, count):
    """q-shifted factorial ``(x; base)_count``.

    >>> pochhammer(Fraction(1, 2), Fraction(1, 2), 2)
    Fraction(3, 8)
    """
    if count < 0:
        raise ValueError(f"count must be >= 0, got {count}")
    x = as_rat(x)
    base = as_rat(base)
    result = Fraction(1)
    power = Fraction(1)
    for _ in range(count):
        result *= 1 - x * power
        power *= base
    return result


def poch_fraction(numerators, denominators, base, count):
    """Fraction form ``prod (a_i; base)_count / prod (b_j; base)_count``."""
    num = Fraction(1)
    for a in numerators:
        num *= pochhammer(a, base, count)
    den = Fraction(1)
    for j, b in enumerate(denominators):
        value = pochhammer(b, base, count)
        if value == 0:
            raise ZeroDenominator(
                f"({b}; {base})_{count} = 0", factor=f"denominator[{j}]"
            )
        den *= value
    return num / den


def catalan(n):
    """The n-th Catalan number ``binom(2n, n) / (n + 1)``."""
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    return comb(2 * n, n) // (n + 1)


def shapiro_check(n):
    """Check ``sum_k C(2k) C(2n-2k) == 4**n C(n)``.

    Returns ``(holds, lhs, rhs)`` with both sides as exact integers.
    """
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    lhs = sum(catalan(2 * k) * catalan(2 * n - 2 * k) for k in range(n + 1))
    rhs = 4**n * catalan(n)
    return lhs == rhs, lhs, rhs

"""Exact evaluation of terminating basic hypergeometric series."""

from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple

from .params import AffineExp, Mono, eval_mono
from .qcore import ZeroDenominator, pochhammer


def terminating_param():
    """``q^(-n)``, i.e. ``p^(-2n)``."""
    return Mono(1, AffineExp(0, -2))


class MalformedSeries(ValueError):
    pass


@dataclass(frozen=True)
class SeriesSpec:
    """A terminating ``r+1 phi s`` series.

    ``lower`` excludes the implicit ``(B; B)_k`` factor, which is added at
    evaluation time from ``base``.
    """

    upper: Tuple[Mono, ...]
    lower: Tuple[Mono, ...]
    argument: Mono = Mono(1, AffineExp(2))
    base: Mono = Mono(1, AffineExp(2))
    balanced: bool = True

    def __post_init__(self):
        object.__setattr__(self, "upper", tuple(self.upper))
        object.__setattr__(self, "lower", tuple(self.lower))
        self.validate()

    def validate(self):
        b = self.base
        if b.coeff != 1 or b.var_exps or not b.p_exp.is_constant or b.p_exp.c0 not in (1, 2):
            raise MalformedSeries(f"base must be p or p^2, got {b}")
        if not self.upper or self.upper[0] != terminating_param():
            raise MalformedSeries("first upper parameter must be q^(-n)")
        if self.balanced and len(self.upper) != len(self.lower) + 1:
            raise MalformedSeries(
                f"expected {len(self.lower) + 1} upper parameters, got {len(self.upper)}"
            )

    @property
    def variables(self):
        names = set()
        for m in self.upper + self.lower + (self.argument,):
            names |= m.variables
        return names

    @property
    def shape(self):
        return len(self.upper), len(self.lower)


def _values(spec, pt):
    base = eval_mono(spec.base, pt)
    upper = [eval_mono(m, pt) for m in spec.upper]
    lower = [base] + [eval_mono(m, pt) for m in spec.lower]
    return base, upper, lower, eval_mono(spec.argument, pt)


def term(spec, pt, k):
    """The k-th summand, computed from scratch."""
    if k < 0:
        raise ValueError("k must be >= 0")
    base, upper, lower, z = _values(spec, pt)
    num = Fraction(1)
    for a in upper:
        num *= pochhammer(a, base, k)
    den = Fraction(1)
    for j, b in enumerate(lower):
        value = pochhammer(b, base, k)
        if value == 0:
            raise ZeroDenominator(
                "lower Pochhammer factor vanishes", k=k, factor=_factor_label(j)
            )
        den *= value
    return num / den * z**k


def _factor_label(j):
    return "implicit (B;B)_k" if j == 0 else f"lower[{j - 1}]"


def iter_terms(spec, pt, extra=0):
    """Yield summands k = 0..n+extra using running products."""
    base, upper, lower, z = _values(spec, pt)
    value = Fraction(1)
    power = Fraction(1)  # base**k
    last = pt.n + extra
    for k in range(last + 1):
        yield value
        if k == last:
            return
        ratio = z
        for a in upper:
            ratio *= 1 - a * power
        for j, b in enumerate(lower):
            f = 1 - b * power
            if f == 0:
                raise ZeroDenominator(
                    "lower Pochhammer factor vanishes", k=k + 1, factor=_factor_label(j)
                )
            ratio /= f
        value *= ratio
        power *= base


def eval_phi(spec, pt):
    """Sum the terminating series for k = 0..n."""
    return sum(iter_terms(spec, pt), Fraction(0))


def eval_phi_direct(spec, pt):
    """Same sum as :func:`eval_phi` but with each term built independently."""
    return sum((term(spec, pt, k) for k in range(pt.n + 1)), Fraction(0))

"""Parameter monomials ``coeff * p**e(n, k) * prod v**e_v``.

The base ``q`` never appears directly: every half-integer power of ``q``
is an integer power of ``p`` under ``q = p**2``. For example ``-q^(1/2)``
is ``Mono(-1, AffineExp(1))`` and ``q^(3/2-n)/(ab)`` is
``Mono(1, AffineExp(3, -2), {"a": -1, "b": -1})``.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Mapping, Tuple

from .qcore import ZeroDenominator, as_rat

RESERVED_NAMES = frozenset({"q", "p", "n", "k", "z"})


class MissingVariable(KeyError):
    pass


class ZeroBase(ZeroDenominator):
    pass


class ZeroCoefficient(ZeroDenominator):
    pass


@dataclass(frozen=True, order=True)
class AffineExp:
    """Integer-valued exponent ``c0 + cn*n + ck*k``."""

    c0: int = 0
    cn: int = 0
    ck: int = 0

    def __call__(self, n=0, k=0):
        return self.c0 + self.cn * n + self.ck * k

    def __add__(self, other):
        return AffineExp(self.c0 + other.c0, self.cn + other.cn, self.ck + other.ck)

    def __neg__(self):
        return AffineExp(-self.c0, -self.cn, -self.ck)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, m):
        return AffineExp(self.c0 * m, self.cn * m, self.ck * m)

    @property
    def is_constant(self):
        return self.cn == 0 and self.ck == 0


def _clean(var_exps):
    return tuple(sorted((v, e) for v, e in dict(var_exps).items() if e != 0))


@dataclass(frozen=True)
class Mono:
    """A Laurent monomial in ``p`` and named variables with a rational coefficient.

    ``var_exps`` is stored as a sorted tuple of ``(name, exponent)`` pairs so
    that monomials are hashable and compare structurally.
    """

    coeff: Fraction = Fraction(1)
    p_exp: AffineExp = AffineExp()
    var_exps: Tuple[Tuple[str, int], ...] = ()

    def __init__(self, coeff=1, p_exp=AffineExp(), var_exps=()):
        if isinstance(p_exp, int):
            p_exp = AffineExp(p_exp)
        object.__setattr__(self, "coeff", as_rat(coeff))
        object.__setattr__(self, "p_exp", p_exp)
        object.__setattr__(self, "var_exps", _clean(var_exps))

    @property
    def variables(self):
        return {v for v, _ in self.var_exps}

    def exponent(self, var):
        return dict(self.var_exps).get(var, 0)

    def __mul__(self, other):
        if not isinstance(other, Mono):
            return NotImplemented
        return mono_mul(self, other)

    def __truediv__(self, other):
        if not isinstance(other, Mono):
            return NotImplemented
        return mono_mul(self, mono_inv(other))

    def __neg__(self):
        return Mono(-self.coeff, self.p_exp, self.var_exps)

    def __pow__(self, m):
        return mono_pow(self, m)


ONE = Mono()


def var(name, exp=1):
    return Mono(1, AffineExp(), {name: exp})


def qpow(c0=0, cn=0, ck=0, coeff=1):
    """``coeff * p**(c0 + cn*n + ck*k)``; note these are powers of p, not q."""
    return Mono(coeff, AffineExp(c0, cn, ck))


def mono_mul(m1, m2):
    exps: Dict[str, int] = dict(m1.var_exps)
    for v, e in m2.var_exps:
        exps[v] = exps.get(v, 0) + e
    return Mono(m1.coeff * m2.coeff, m1.p_exp + m2.p_exp, exps)


def mono_inv(m):
    if m.coeff == 0:
        raise ZeroCoefficient("cannot invert a monomial with coefficient 0")
    return Mono(1 / m.coeff, -m.p_exp, {v: -e for v, e in m.var_exps})


def mono_pow(m, power):
    if power < 0:
        return mono_pow(mono_inv(m), -power)
    return Mono(m.coeff**power, m.p_exp.scale(power), {v: e * power for v, e in m.var_exps})


@dataclass(frozen=True)
class Point:
    """A rational instantiation of p, the indices n and k, and the named variables."""

    p: Fraction
    n: int = 0
    k: int = 0
    vars: Mapping[str, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "p", as_rat(self.p))
        object.__setattr__(
            self, "vars", {name: as_rat(v) for name, v in sorted(dict(self.vars).items())}
        )
        if self.n < 0 or self.k < 0:
            raise ValueError("n and k must be non-negative")

    def check(self):
        """Raise ValueError if the point violates p not in {0, 1, -1} or has a zero variable."""
        if self.p in (0, 1, -1):
            raise ValueError(f"p must avoid 0 and +-1, got {self.p}")
        for name, value in self.vars.items():
            if value == 0:
                raise ValueError(f"variable {name} must be nonzero")
        return self

    def with_k(self, k):
        return Point(self.p, self.n, k, self.vars)

    @property
    def q(self):
        return self.p**2

    def as_dict(self):
        out = {"p": str(self.p), "n": self.n}
        if self.k:
            out["k"] = self.k
        out.update({name: str(v) for name, v in self.vars.items()})
        return out

    def __str__(self):
        return ",".join(f"{key}={value}" for key, value in self.as_dict().items())


def eval_mono(m, pt):
    """Exact value of ``m`` at ``pt``."""
    e = m.p_exp(pt.n, pt.k)
    if pt.p == 0 and e < 0:
        raise ZeroBase("p = 0 raised to a negative power")
    value = m.coeff * pt.p**e
    for name, exp in m.var_exps:
        try:
            x = pt.vars[name]
        except KeyError:
            raise MissingVariable(name) from None
        if x == 0 and exp < 0:
            raise ZeroBase(f"variable {name} = 0 raised to a negative power")
        value *= x**exp
    return value

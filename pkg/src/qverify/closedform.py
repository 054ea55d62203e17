"""Expression trees for identity sides and their exact evaluator.

Trees are kept in a canonical form: a product, quotient or negation whose
operands are all ``Const`` nodes is folded into a single ``Const``. The
operator overloads on :class:`Expr` and the idlang parser both apply this
rule, so hand-built and parsed trees compare equal.
"""

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Tuple

from .params import AffineExp, Mono, eval_mono, mono_inv, mono_mul, mono_pow
from .qcore import ZeroDenominator
from .series import SeriesSpec, eval_phi


class PoleError(ZeroDenominator):
    pass


class Expr:
    def __add__(self, other):
        return Add(self, lift(other))

    def __radd__(self, other):
        return Add(lift(other), self)

    def __sub__(self, other):
        return Sub(self, lift(other))

    def __rsub__(self, other):
        return Sub(lift(other), self)

    def __mul__(self, other):
        return mul(self, lift(other))

    def __rmul__(self, other):
        return mul(lift(other), self)

    def __truediv__(self, other):
        return div(self, lift(other))

    def __rtruediv__(self, other):
        return div(lift(other), self)

    def __neg__(self):
        return neg(self)


@dataclass(frozen=True, eq=True)
class Const(Expr):
    mono: Mono


@dataclass(frozen=True, eq=True)
class Poch(Expr):
    arg: Mono
    base: Mono
    length: AffineExp


@dataclass(frozen=True, eq=True)
class PochFrac(Expr):
    nums: Tuple[Mono, ...]
    dens: Tuple[Mono, ...]
    base: Mono
    length: AffineExp

    def __post_init__(self):
        object.__setattr__(self, "nums", tuple(self.nums))
        object.__setattr__(self, "dens", tuple(self.dens))


@dataclass(frozen=True, eq=True)
class Phi(Expr):
    spec: SeriesSpec


@dataclass(frozen=True, eq=True)
class Add(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True, eq=True)
class Sub(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True, eq=True)
class Mul(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True, eq=True)
class Div(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True, eq=True)
class Neg(Expr):
    operand: Expr


BINARY = (Add, Sub, Mul, Div)


def lift(x):
    if isinstance(x, Expr):
        return x
    if isinstance(x, Mono):
        return Const(x)
    return Const(Mono(x))


def mul(a, b):
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(mono_mul(a.mono, b.mono))
    return Mul(a, b)


def div(a, b):
    if isinstance(a, Const) and isinstance(b, Const) and b.mono.coeff != 0:
        return Const(mono_mul(a.mono, mono_inv(b.mono)))
    return Div(a, b)


def neg(a):
    if isinstance(a, Const):
        return Const(-a.mono)
    return Neg(a)


# -- evaluation ---------------------------------------------------------------

def _poch_value(arg, base, length, pt):
    count = length(pt.n, pt.k)
    if count < 0:
        raise ValueError(f"negative Pochhammer length {count}")
    x = eval_mono(arg, pt)
    b = eval_mono(base, pt)
    value = Fraction(1)
    power = Fraction(1)
    for _ in range(count):
        value *= 1 - x * power
        power *= b
    return value


def eval_expr(e, pt, path="$"):
    """Evaluate ``e`` at ``pt`` exactly; poles raise :class:`PoleError`."""
    if isinstance(e, Const):
        return eval_mono(e.mono, pt)
    if isinstance(e, Poch):
        return _poch_value(e.arg, e.base, e.length, pt)
    if isinstance(e, PochFrac):
        value = Fraction(1)
        for m in e.nums:
            value *= _poch_value(m, e.base, e.length, pt)
        for j, m in enumerate(e.dens):
            d = _poch_value(m, e.base, e.length, pt)
            if d == 0:
                raise PoleError("Pochhammer denominator vanishes", path=f"{path}.dens[{j}]")
            value /= d
        return value
    if isinstance(e, Phi):
        try:
            return eval_phi(e.spec, pt)
        except ZeroDenominator as exc:
            raise PoleError(str(exc), k=exc.k, factor=exc.factor, path=f"{path}.phi") from None
    if isinstance(e, Neg):
        return -eval_expr(e.operand, pt, path + ".neg")
    left = eval_expr(e.left, pt, path + ".0")
    right = eval_expr(e.right, pt, path + ".1")
    if isinstance(e, Add):
        return left + right
    if isinstance(e, Sub):
        return left - right
    if isinstance(e, Mul):
        return left * right
    if isinstance(e, Div):
        if right == 0:
            raise PoleError("division by zero", path=path + ".1")
        return left / right
    raise TypeError(f"not an expression node: {e!r}")


# -- traversal ----------------------------------------------------------------

def children(e):
    if isinstance(e, BINARY):
        return (e.left, e.right)
    if isinstance(e, Neg):
        return (e.operand,)
    return ()


def walk(e):
    yield e
    for c in children(e):
        yield from walk(c)


def free_variables(e):
    names = set()
    for node in walk(e):
        for m in node_monos(node):
            names |= m.variables
    return names


def node_monos(node):
    """Monomials held directly by a leaf node (bases excluded)."""
    if isinstance(node, Const):
        return [node.mono]
    if isinstance(node, Poch):
        return [node.arg]
    if isinstance(node, PochFrac):
        return list(node.nums) + list(node.dens)
    if isinstance(node, Phi):
        s = node.spec
        return list(s.upper) + list(s.lower) + [s.argument]
    return []


def uses_k(e):
    for node in walk(e):
        if any(m.p_exp.ck for m in node_monos(node)):
            return True
        if isinstance(node, (Poch, PochFrac)) and node.length.ck:
            return True
    return False


def map_monos(e, fn):
    """Rebuild ``e`` with every leaf monomial (bases excluded) replaced by ``fn(m)``.

    Products of constants are re-folded, so the result stays canonical.
    """
    if isinstance(e, Const):
        return Const(fn(e.mono))
    if isinstance(e, Poch):
        return Poch(fn(e.arg), e.base, e.length)
    if isinstance(e, PochFrac):
        return PochFrac(tuple(map(fn, e.nums)), tuple(map(fn, e.dens)), e.base, e.length)
    if isinstance(e, Phi):
        s = e.spec
        return Phi(
            replace(
                s,
                upper=tuple(map(fn, s.upper)),
                lower=tuple(map(fn, s.lower)),
                argument=fn(s.argument),
            )
        )
    if isinstance(e, Neg):
        return neg(map_monos(e.operand, fn))
    left, right = map_monos(e.left, fn), map_monos(e.right, fn)
    if isinstance(e, Mul):
        return mul(left, right)
    if isinstance(e, Div):
        return div(left, right)
    return type(e)(left, right)


def replace_nth_mono(e, index, fn):
    """Apply ``fn`` to the ``index``-th leaf monomial in traversal order only."""
    counter = [0]

    def pick(m):
        i = counter[0]
        counter[0] += 1
        return fn(m) if i == index else m

    return map_monos(e, pick)


def count_monos(e):
    return sum(len(node_monos(node)) for node in walk(e))


# -- substitution -------------------------------------------------------------

class _Collapse:
    """Sentinel for a ``var -> 0`` specialization."""

    def __repr__(self):
        return "COLLAPSE"

    def __reduce__(self):
        # keep identity checks working across process boundaries
        return "COLLAPSE"


COLLAPSE = _Collapse()


def subst_mono(m, mapping):
    out = Mono(m.coeff, m.p_exp, {v: e for v, e in m.var_exps if v not in mapping})
    for v, e in m.var_exps:
        if v not in mapping:
            continue
        target = mapping[v]
        if target is COLLAPSE:
            if e < 0:
                raise PoleError(f"{v} -> 0 with negative exponent")
            return Mono(0)
        out = mono_mul(out, mono_pow(target, e))
    return out


def _vanishes(m, mapping):
    return any(mapping.get(v) is COLLAPSE and e > 0 for v, e in m.var_exps)


def substitute(e, mapping):
    """Simultaneously substitute monomials for variables.

    A ``COLLAPSE`` target sends the variable to 0. Pochhammer parameters that
    vanish under it contribute ``(0; B)_k = 1`` and are dropped outright, which
    turns e.g. the 5phi4 with the ``(qx, x)`` pair into the plain 4phi3.
    """
    if isinstance(e, Poch):
        if _vanishes(e.arg, mapping):
            return Const(Mono(1))
        return Poch(subst_mono(e.arg, mapping), e.base, e.length)
    if isinstance(e, PochFrac):
        nums = tuple(subst_mono(m, mapping) for m in e.nums if not _vanishes(m, mapping))
        dens = tuple(subst_mono(m, mapping) for m in e.dens if not _vanishes(m, mapping))
        return PochFrac(nums, dens, e.base, e.length)
    if isinstance(e, Phi):
        s = e.spec
        upper = tuple(subst_mono(m, mapping) for m in s.upper if not _vanishes(m, mapping))
        lower = tuple(subst_mono(m, mapping) for m in s.lower if not _vanishes(m, mapping))
        balanced = s.balanced and len(upper) == len(lower) + 1
        return Phi(
            SeriesSpec(upper, lower, subst_mono(s.argument, mapping), s.base, balanced)
        )
    if isinstance(e, Const):
        return Const(subst_mono(e.mono, mapping))
    if isinstance(e, Neg):
        return neg(substitute(e.operand, mapping))
    left, right = substitute(e.left, mapping), substitute(e.right, mapping)
    if isinstance(e, Mul):
        return mul(left, right)
    if isinstance(e, Div):
        return div(left, right)
    return type(e)(left, right)


# -- degree bounds ------------------------------------------------------------

def mono_degree(m, n, k=0):
    """Degree bound for ``1 - m`` as a rational function of p and the variables."""
    if m.coeff == 0:
        return 0
    return abs(m.p_exp(n, k)) + sum(abs(e) for _, e in m.var_exps)


def _poch_degree(arg, base, count, n, k):
    b = base.p_exp(n, k)
    total = 0
    for i in range(count):
        total += abs(arg.p_exp(n, k) + b * i) + sum(abs(e) for _, e in arg.var_exps)
    return total


def degree_bound(e, n, k=0):
    """Upper bound on max(deg numerator, deg denominator) of ``e`` at fixed n, k.

    Uses deg(fg), deg(f +- g) <= deg f + deg g on the (numerator, denominator)
    representation; the bound is crude but always valid.
    """
    if isinstance(e, Const):
        return mono_degree(e.mono, n, k)
    if isinstance(e, Poch):
        return _poch_degree(e.arg, e.base, e.length(n, k), n, k)
    if isinstance(e, PochFrac):
        count = e.length(n, k)
        return sum(_poch_degree(m, e.base, count, n, k) for m in e.nums + e.dens)
    if isinstance(e, Phi):
        s = e.spec
        total = 0
        for j in range(n + 1):
            term = sum(_poch_degree(m, s.base, j, n, k) for m in s.upper + s.lower)
            term += _poch_degree(s.base, s.base, j, n, k)
            term += j * mono_degree(s.argument, n, k)
            total += term
        return total
    return sum(degree_bound(c, n, k) for c in children(e))

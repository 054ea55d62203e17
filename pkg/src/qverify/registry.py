"""Built-in identities and the specialization links between them.

Every parameter is transcribed under ``q = p**2``: ``qp(c0, cn, ck)`` is
``q^(c0 + cn*n + ck*k)`` with half-integer coefficients allowed, and bases
``Q``/``R`` stand for ``q`` and ``q^(1/2)``.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Tuple

from .closedform import COLLAPSE, Const, Expr, PochFrac, Phi, free_variables, uses_k
from .params import AffineExp, Mono, var
from .series import SeriesSpec, terminating_param

h = Fraction(1, 2)


def qp(c0=0, cn=0, ck=0):
    """``q^(c0 + cn*n + ck*k)`` as a monomial in p."""
    doubled = [Fraction(c) * 2 for c in (c0, cn, ck)]
    if any(d.denominator != 1 for d in doubled):
        raise ValueError(f"q-exponent {c0}+{cn}n+{ck}k is not a half-integer form")
    return Mono(1, AffineExp(*(int(d) for d in doubled)))


Q = qp(1)
R = qp(h)
T = terminating_param()
LEN_N = AffineExp(0, 1)
LEN_K = AffineExp(0, 0, 1)
a, b, c, d, e, x = (var(name) for name in "abcdex")


def phi(upper, lower):
    return Phi(SeriesSpec(tuple(upper), tuple(lower), Q, Q))


def pf(nums, dens, base=Q, length=LEN_N):
    return PochFrac(tuple(nums), tuple(dens), base, length)


def C(m):
    return Const(m if isinstance(m, Mono) else Mono(m))


def diff(m1, m2):
    """The binomial ``m1 - m2`` of two monomials (or integers)."""
    return C(m1) - C(m2)


@dataclass(frozen=True)
class Identity:
    id: str
    lhs: Expr
    rhs: Expr
    variables: Tuple[str, ...]
    uses_k: bool = False
    provenance: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        used = free_variables(self.lhs) | free_variables(self.rhs)
        undeclared = used - set(self.variables)
        if undeclared:
            raise ValueError(f"{self.id}: undeclared variables {sorted(undeclared)}")
        if uses_k(self.lhs) or uses_k(self.rhs):
            if not self.uses_k:
                raise ValueError(f"{self.id}: depends on k but uses_k is false")


@dataclass(frozen=True)
class SpecializationLink:
    general_id: str
    special_id: str
    substitution: Dict[str, object]
    description: str = field(default="", compare=False)


def _thm_a_lhs():
    return phi([T, a, b, qp(h, -1) / (a * b)], [qp(1, -1) / a, qp(0, -1) / b, R * a * b])


def _conj_factor():
    return pf([a * b / Q], [a, b / Q]) * pf([a, b / Q, -R], [a * b / Q], R)


def _build():
    qn2 = qp(0, h)  # q^(n/2)
    qn = qp(0, 1)
    out = []

    def add(id_, lhs, rhs, variables, where, with_k=False):
        out.append(Identity(id_, lhs, rhs, tuple(variables), with_k, where))

    add(
        "sears",
        phi([T, a, b, c], [d, e, qp(1, -1) * a * b * c / (d * e)]),
        pf([d / a, d * e / (b * c)], [d, d * e / (a * b * c)])
        * phi([T, a, e / b, e / c], [e, d * e / (b * c), qp(1, -1) * a / d]),
        "abcde",
        "Sears' balanced 4phi3 transformation",
    )
    add(
        "andrews_sum",
        phi([T, a, b, qp(h, -1) / (a * b)], [qp(1, -1) / a, qp(1, -1) / b, R * a * b]),
        C(qp(0, -h)) * pf([a * b], [a, b]) * pf([a, b, -R], [a * b], R),
        "ab",
        "Andrews' 4phi3 summation extending Shapiro's identity",
    )
    add(
        "andrews_conj",
        phi([T, a, b, qp(3 * h, -1) / (a * b)], [qp(1, -1) / a, qp(2, -1) / b, R * a * b]),
        _conj_factor()
        * (diff(R, a * b) * diff(Q, b * qn2) / diff(qp(3 * h), a * b**2 * qn))
        * (
            C(qp(1, -h)) / diff(Q, b)
            + C(a * b) * diff(R, b * qn2) * diff(Q, a * b * qn)
            / (diff(R, b) * diff(R, a * b * qn) * diff(Q, a * b * qn2))
        ),
        "ab",
        "Andrews' conjectured 4phi3 summation",
    )
    add(
        "thm_a",
        _thm_a_lhs(),
        pf([a * b], [a, Q * b]) * pf([a, R * b, -R], [a * b], R),
        "ab",
        "4phi3 summation with lower parameters q^(1-n)/a, q^(-n)/b",
    )
    add(
        "thm_a_swap",
        phi([T, a, b, qp(h, -1) / (a * b)], [qp(0, -1) / a, qp(1, -1) / b, R * a * b]),
        pf([a * b], [Q * a, b]) * pf([R * a, b, -R], [a * b], R),
        "ab",
        "thm_a with a and b interchanged",
    )
    add(
        "thm_a_proof_step",
        _thm_a_lhs(),
        pf([qp(1, -1) / a**2, Q * a * b], [qp(1, -1) / a, Q * b])
        * phi([T, a, R * a, qn * a**2 * b**2], [R * a * b, Q * a * b, a**2]),
        "ab",
        "Sears instance reducing thm_a to known_eval",
    )
    add(
        "known_eval",
        phi([T, a, R * a, qn * c**2], [R * c, Q * c, a**2]),
        pf([-R, qn2 * c, qp(0, -h) * a / c], [-a, qp(h, h) * c, qp(0, -h) / c], R),
        "ac",
        "4phi3 evaluation with upper parameters a, q^(1/2)a, q^n c^2",
    )
    add(
        "thm_b",
        phi(
            [T, Q * x, a, b, qp(h, -1) / (a * b)],
            [x, qp(1, -1) / a, qp(1, -1) / b, R * a * b],
        ),
        diff(qp(0, -h), x) / diff(1, x) * pf([a * b], [a, b]) * pf([a, b, -R], [a * b], R),
        "abx",
        "5phi4 extension of andrews_sum by the (qx, x) pair",
    )
    A, B = qp(0, -1) / a, qp(0, -1) / b
    add(
        "rel_b",
        pf([Q * x], [x], Q, LEN_K),
        diff(1, A) * diff(B, x) / (diff(1, x) * diff(B, A))
        * (diff(1, qp(0, -1, 1) / a) / diff(1, A))
        + diff(1, B) * diff(A, x) / (diff(1, x) * diff(A, B))
        * (diff(1, qp(0, -1, 1) / b) / diff(1, B)),
        "abx",
        "partial fractions of (qx;q)_k/(x;q)_k joining thm_a and thm_a_swap",
        with_k=True,
    )
    add(
        "guo_a",
        phi([T, a, b, qp(3 * h, -1) / (a * b)], [qp(1, -1) / a, qp(1, -1) / b, R * a * b]),
        diff(1, a * b * qp(-h, h)) / diff(1, a * b * qp(-h, 1))
        * pf([a * b], [a, b]) * pf([a, b, -R], [a * b], R),
        "ab",
        "Guo's summation; thm_b at x = q^(1/2-n)/(ab)",
    )
    add(
        "corl_a",
        phi([T, a, b, qp(h, -1) / (a * b)], [qp(1, -1) / a, qp(1, -1) / b, qp(-h) * a * b]),
        C(qp(0, -h)) * pf([a * b], [a, b]) * pf([a, b, -R], [qp(-h) * a * b], R),
        "ab",
        "thm_b at x = q^(-1/2)ab",
    )
    add(
        "corl_b",
        phi([T, a, b, qp(3 * h, -1) / (a * b)], [qp(1, -1) / a, qp(2, -1) / b, qp(-h) * a * b]),
        diff(b, qp(1, -h)) / diff(b, Q)
        * pf([a * b / Q], [a, b / Q])
        * pf([a, b / Q, -R], [a * b / Q], R),
        "ab",
        "thm_b at x -> b/q, b -> b/q",
    )
    add(
        "thm_c",
        phi(
            [T, Q * x, a, b, qp(3 * h, -1) / (a * b)],
            [x, qp(1, -1) / a, qp(2, -1) / b, R * a * b],
        ),
        _conj_factor()
        * (diff(R, a * b) * diff(Q, b * qn2) / (diff(1, x) * diff(qp(3 * h), a * b**2 * qn)))
        * (
            diff(qp(1, -h), x * b * qn2) / diff(Q, b)
            - diff(R, b * qn2) * diff(R * x, a * b) * diff(Q, a * b * qn)
            / (diff(R, b) * diff(R, a * b * qn) * diff(Q, a * b * qn2))
        ),
        "abx",
        "5phi4 extension of andrews_conj by the (qx, x) pair",
    )
    A, B = qp(1, -1) / b, qp(-h) * a * b
    add(
        "rel_c",
        pf([Q * x], [x], Q, LEN_K),
        diff(1, A) * diff(x, B) / (diff(1, x) * diff(A, B))
        * (diff(1, qp(1, -1, 1) / b) / diff(1, A))
        + diff(1, B) * diff(A, x) / (diff(1, x) * diff(A, B))
        * (diff(1, qp(-h, 0, 1) * a * b) / diff(1, B)),
        "abx",
        "partial fractions of (qx;q)_k/(x;q)_k joining guo_a and corl_b",
        with_k=True,
    )
    add(
        "guo_44",
        phi([T, a, b, qp(5 * h, -1) / (a * b)], [qp(2, -1) / a, qp(2, -1) / b, qp(-h) * a * b]),
        C(qp(0, -h)) * diff(qp(3 * h), a * b) / diff(qp(3 * h), qn * a * b)
        * pf([a * b / Q], [a / Q, b / Q])
        * pf([qp(-h) * a, qp(-h) * b, -R], [qp(-3 * h) * a * b], R),
        "ab",
        "Guo's summation; thm_c at x -> a/q, a -> a/q",
    )
    add(
        "corl_c",
        phi([T, a, b, qp(3 * h, -1) / (a * b)], [qp(1, -1) / a, qp(2, -1) / b, qp(-h) * a * b]),
        C(qp(0, -h)) * pf([a * b / Q], [a, b / Q]) * pf([a, qp(-h) * b, -R], [a * b / Q], R),
        "ab",
        "thm_c at x = q^(-1/2)ab",
    )
    add(
        "corl_d",
        phi([T, a, b, qp(5 * h, -1) / (a * b)], [qp(1, -1) / a, qp(2, -1) / b, R * a * b]),
        _conj_factor()
        * (
            diff(R, a * b) * diff(Q, b * qn2)
            / (diff(qp(3 * h), a * b * qn) * diff(qp(3 * h), a * b**2 * qn))
        )
        * (
            diff(R, b * qn2) * (C(Q) + C(a * b * qn2)) * diff(Q, a * b * qn)
            / (diff(R, b) * diff(R, a * b * qn))
            - C(qp(1, h)) * diff(R, a) / diff(1, Q / b)
        ),
        "ab",
        "thm_c at x = q^(3/2-n)/(ab)",
    )
    return tuple(out)


def _build_links():
    return (
        SpecializationLink("thm_b", "andrews_sum", {"x": COLLAPSE}, "x = 0"),
        SpecializationLink("thm_b", "guo_a", {"x": qp(h, -1) / (a * b)}, "x = q^(1/2-n)/(ab)"),
        SpecializationLink("thm_b", "corl_a", {"x": qp(-h) * a * b}, "x = q^(-1/2)ab"),
        SpecializationLink("thm_b", "corl_b", {"x": b / Q, "b": b / Q}, "x -> b/q, b -> b/q"),
        SpecializationLink("thm_c", "andrews_conj", {"x": COLLAPSE}, "x = 0"),
        SpecializationLink("thm_c", "guo_44", {"x": a / Q, "a": a / Q}, "x -> a/q, a -> a/q"),
        SpecializationLink("thm_c", "corl_c", {"x": qp(-h) * a * b}, "x = q^(-1/2)ab"),
        SpecializationLink("thm_c", "corl_d", {"x": qp(3 * h, -1) / (a * b)}, "x = q^(3/2-n)/(ab)"),
    )


# Sears' a, b, c, d, e chosen so that its statement becomes thm_a_proof_step.
SEARS_TO_PROOF_STEP = {
    "a": a,
    "b": b,
    "c": qp(h, -1) / (a * b),
    "d": qp(1, -1) / a,
    "e": R * a * b,
}

_IDENTITIES = _build()
_LINKS = _build_links()


def builtin_identities():
    return list(_IDENTITIES)


def builtin_specializations():
    return list(_LINKS)


def lookup(identity_id, identities=None):
    for ident in identities if identities is not None else _IDENTITIES:
        if ident.id == identity_id:
            return ident
    raise KeyError(f"unknown identity {identity_id!r}")

"""Randomized exact verification of identities over rational sample points.

Points are drawn sequentially from a seeded generator before anything is
evaluated, so reports do not depend on how evaluation is scheduled.
"""

import json
import logging
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from fractions import Fraction
from functools import lru_cache
from typing import List, Optional

from .closedform import (
    Const,
    Mul,
    count_monos,
    degree_bound,
    eval_expr,
    replace_nth_mono,
    substitute,
)
from .params import AffineExp, Mono, Point, var
from .qcore import ZeroDenominator
from .registry import Identity, SpecializationLink, lookup

log = logging.getLogger(__name__)

PASS, FAIL, INCONCLUSIVE = "PASS", "FAIL", "INCONCLUSIVE"
POLE_WARNING_RATE = 0.2


class ResampleExhausted(RuntimeError):
    pass


@dataclass(frozen=True)
class SampleConfig:
    seed: int = 42
    n_min: int = 0
    n_max: int = 6
    samples_per_n: int = 25
    numerator_bound: int = 10
    denominator_bound: int = 10
    max_resamples: int = 200

    def __post_init__(self):
        if self.n_min < 0 or self.n_max < self.n_min:
            raise ValueError(f"bad n range {self.n_min}..{self.n_max}")
        if self.samples_per_n < 1:
            raise ValueError("samples_per_n must be >= 1")
        if self.max_resamples < 1:
            raise ValueError("max_resamples must be >= 1")
        if self.numerator_bound < 1 or self.denominator_bound < 1:
            raise ValueError("bounds must be positive")

    @property
    def n_values(self):
        return range(self.n_min, self.n_max + 1)


@lru_cache(maxsize=None)
def value_pool(numerator_bound, denominator_bound):
    """All distinct rationals ``+-num/den`` with 1 <= num, den <= the bounds, sorted."""
    values = {
        Fraction(sign * num, den)
        for num in range(1, numerator_bound + 1)
        for den in range(1, denominator_bound + 1)
        for sign in (1, -1)
    }
    return tuple(sorted(values))


def make_rng(config, label, n):
    return random.Random(f"{config.seed}/{label}/{n}")


def sample_point(rng, config, variables, n):
    """Draw p and every variable uniformly from the value pool.

    p is redrawn while it equals +-1; variables are never zero by construction.
    """
    if isinstance(variables, Identity):
        variables = variables.variables
    pool = value_pool(config.numerator_bound, config.denominator_bound)
    for _ in range(config.max_resamples):
        p = rng.choice(pool)
        if p not in (1, -1):
            break
    else:
        raise ResampleExhausted(f"no admissible p after {config.max_resamples} draws")
    values = {name: rng.choice(pool) for name in sorted(variables)}
    return Point(p, n, 0, values)


# -- evaluation of one point ----------------------------------------------------

@dataclass(frozen=True)
class Check:
    """Pairs of expressions that must agree at a point, over k = 0..n if ``over_k``."""

    pairs: tuple
    over_k: bool = False


def check_point(check, pt):
    """Return ``("ok", None)``, ``("pole", where)`` or ``("fail", detail)``."""
    ks = range(pt.n + 1) if check.over_k else (pt.k,)
    for k in ks:
        at = pt.with_k(k)
        for label, left, right in check.pairs:
            try:
                lv = eval_expr(left, at, f"{label}.lhs")
                rv = eval_expr(right, at, f"{label}.rhs")
            except ZeroDenominator as exc:
                where = exc.where()
                if check.over_k:
                    where += f" (at relation k={k})"
                return "pole", where
            if lv != rv:
                return "fail", {"point": at.as_dict(), "lhs": str(lv), "rhs": str(rv), "pair": label}
    return "ok", None


def _check_star(args):
    return check_point(*args)


# -- reports -------------------------------------------------------------------

@dataclass
class NTally:
    n: int
    tested: int = 0
    poles: int = 0
    degree_bound: int = 0
    pole_sites: List[dict] = field(default_factory=list)
    exhausted: bool = False
    warning: Optional[str] = None


@dataclass
class Report:
    identity: str
    verdict: str
    config: dict
    per_n: List[NTally]
    failures: List[dict]
    degree_bound: int
    kind: str = "identity"

    def as_dict(self):
        return {
            "identity": self.identity,
            "kind": self.kind,
            "verdict": self.verdict,
            "config": self.config,
            "degree_bound": self.degree_bound,
            "per_n": [asdict(t) for t in self.per_n],
            "failures": self.failures,
        }

    def to_json(self):
        return json.dumps(self.as_dict(), indent=2)

    @property
    def tested(self):
        return sum(t.tested for t in self.per_n)

    @property
    def poles(self):
        return sum(t.poles for t in self.per_n)


def _run(label, check, variables, config, executor=None, degree=None, kind="identity"):
    tallies = []
    failures = []
    chunk = config.samples_per_n
    for n in config.n_values:
        rng = make_rng(config, label, n)
        tally = NTally(n, degree_bound=degree(n) if degree else 0)
        budget = config.samples_per_n + config.max_resamples
        drawn = 0
        try:
            while tally.tested < config.samples_per_n and drawn < budget:
                size = min(chunk, budget - drawn)
                points = [sample_point(rng, config, variables, n) for _ in range(size)]
                drawn += size
                tasks = [(check, pt) for pt in points]
                results = list(executor.map(_check_star, tasks) if executor else map(_check_star, tasks))
                for pt, (status, detail) in zip(points, results):
                    if tally.tested >= config.samples_per_n:
                        break
                    if status == "pole":
                        tally.poles += 1
                        tally.pole_sites.append({"point": pt.as_dict(), "where": detail})
                    else:
                        tally.tested += 1
                        if status == "fail":
                            failures.append(detail)
        except ResampleExhausted as exc:
            tally.warning = str(exc)
        if tally.tested < config.samples_per_n:
            tally.exhausted = True
        seen = tally.tested + tally.poles
        if seen and tally.poles / seen >= POLE_WARNING_RATE:
            tally.warning = f"pole rate {tally.poles}/{seen} at n={n}"
            log.warning("%s: %s", label, tally.warning)
        tallies.append(tally)
    if failures:
        verdict = FAIL
    elif any(t.exhausted for t in tallies):
        verdict = INCONCLUSIVE
    else:
        verdict = PASS
    return Report(
        identity=label,
        verdict=verdict,
        config=asdict(config),
        per_n=tallies,
        failures=failures,
        degree_bound=max((t.degree_bound for t in tallies), default=0),
        kind=kind,
    )


def identity_degree(identity, n):
    ks = range(n + 1) if identity.uses_k else (0,)
    return max(degree_bound(identity.lhs, n, k) + degree_bound(identity.rhs, n, k) for k in ks)


def verify_identity(identity, config=SampleConfig(), executor=None):
    check = Check((("eq", identity.lhs, identity.rhs),), identity.uses_k)
    return _run(
        identity.id,
        check,
        identity.variables,
        config,
        executor,
        degree=lambda n: identity_degree(identity, n),
    )


def specialize(identity, substitution):
    """The general identity with the link's substitution applied to both sides."""
    lhs = substitute(identity.lhs, substitution)
    rhs = substitute(identity.rhs, substitution)
    return lhs, rhs


def verify_specialization(link, config=SampleConfig(), identities=None, executor=None):
    general = lookup(link.general_id, identities)
    special = lookup(link.special_id, identities)
    glhs, grhs = specialize(general, link.substitution)
    check = Check((("lhs", glhs, special.lhs), ("rhs", grhs, special.rhs)))
    return _run(
        f"{link.general_id}->{link.special_id}",
        check,
        special.variables,
        config,
        executor,
        degree=lambda n: max(
            degree_bound(glhs, n) + degree_bound(special.lhs, n),
            degree_bound(grhs, n) + degree_bound(special.rhs, n),
        ),
        kind="specialization",
    )


def verify_all(identities, links, config=SampleConfig(), workers=1):
    """Verify every identity and link; results come back in input order."""
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return _verify_all(identities, links, config, pool)
    return _verify_all(identities, links, config, None)


def _verify_all(identities, links, config, executor):
    reports = [verify_identity(i, config, executor) for i in identities]
    reports += [verify_specialization(l, config, identities, executor) for l in links]
    return reports


# -- confidence -----------------------------------------------------------------

def confidence_note(identity, config=SampleConfig(), n=None):
    pool = value_pool(config.numerator_bound, config.denominator_bound)
    size = len(pool) - sum(1 for v in pool if v in (1, -1))
    names = ", ".join(["p"] + sorted(identity.variables))
    lines = [
        f"{identity.id}: sampled variables {names}; each drawn uniformly from "
        f"{len(pool)} rationals (p from {size})."
    ]
    for m in [n] if n is not None else config.n_values:
        deg = identity_degree(identity, m)
        if deg == 0:
            lines.append(
                f"  n={m}: degree bound 0; both sides are constants, so one agreement "
                f"is an exact proof at this n."
            )
            continue
        per_point = Fraction(deg, size)
        line = (
            f"  n={m}: degree bound {deg}; for fixed n both sides are rational functions, "
            f"so a nonzero difference vanishes at a random point with probability "
            f"<= {deg}/{size}"
        )
        if per_point < 1:
            bound = float(per_point) ** config.samples_per_n
            line += f"; after {config.samples_per_n} agreements <= {bound:.3g}"
        else:
            line += " (vacuous at this pool size; widen the bounds for a useful guarantee)"
        lines.append(line + ".")
    lines.append(
        "  Agreement over rationals establishes the rational-function identity, hence the "
        "complex statement away from poles; this is evidence, not a formal proof."
    )
    return "\n".join(lines)


# -- mutations -----------------------------------------------------------------

# Identities whose value is unchanged by a <-> b: sears (LHS symmetric in a, b, c),
# rel_b and rel_c (both sides equal (1 - x q^k)/(1 - x)), and known_eval, which has
# no b. Swap mutations are not applied to them.
SYMMETRIC_AB = frozenset(
    {"sears", "andrews_sum", "thm_b", "rel_b", "rel_c", "guo_a", "corl_a", "guo_44", "known_eval"}
)


def mutate_scale_rhs(identity):
    return replace(identity, id=identity.id + "~rhs*q", rhs=Mul(identity.rhs, Const(Mono(1, AffineExp(2)))))


def mutate_exponent(identity, index=0, delta=1, side="lhs"):
    """Shift the p-exponent of one leaf monomial (traversal order) by ``delta``."""

    def bump(m):
        return Mono(m.coeff, m.p_exp + AffineExp(delta), m.var_exps)

    expr = getattr(identity, side)
    mutated = replace_nth_mono(expr, index, bump)
    return replace(identity, id=f"{identity.id}~{side}[{index}]{delta:+d}", **{side: mutated})


def mutate_swap_ab(identity):
    swap = {"a": var("b"), "b": var("a")}
    return replace(identity, id=identity.id + "~swap", rhs=substitute(identity.rhs, swap))


def standard_mutations(identity):
    """The RHS*q, exponent and a<->b mutations applicable to ``identity``."""
    out = [mutate_scale_rhs(identity), mutate_exponent(identity, 1, +1), mutate_exponent(identity, 1, -1)]
    if identity.id not in SYMMETRIC_AB:
        out.append(mutate_swap_ab(identity))
    return out


def mono_sites(identity, side="lhs"):
    return count_monos(getattr(identity, side))


# -- presentation ----------------------------------------------------------------

def format_table(reports):
    rows = [("identity", "verdict", "tested", "poles", "failures", "degree")]
    for r in reports:
        rows.append((r.identity, r.verdict, str(r.tested), str(r.poles), str(len(r.failures)), str(r.degree_bound)))
    widths = [max(len(row[i]) for row in rows) for i in range(len(rows[0]))]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in rows]
    lines.insert(1, "  ".join("-" * w for w in widths))
    for r in reports:
        for t in r.per_n:
            if t.warning:
                lines.append(f"warning: {r.identity}: {t.warning}")
        for f in r.failures[:3]:
            lines.append(f"counterexample {r.identity}: {f['point']} lhs={f['lhs']} rhs={f['rhs']}")
    return "\n".join(lines)


def reports_to_json(reports):
    return json.dumps({"reports": [r.as_dict() for r in reports]}, indent=2)


def worst_verdict(reports):
    order = {PASS: 0, FAIL: 1, INCONCLUSIVE: 2}
    return max((r.verdict for r in reports), key=order.__getitem__, default=PASS)

"""Acceptance criteria, each checked exactly and reported on one line.

Run directly with ``python3 tests/test_acceptance.py`` or as part of pytest.
"""

from fractions import Fraction
from importlib import resources

import pytest

from qverify.closedform import eval_expr
from qverify.idlang import parse_identities, serialize_identities
from qverify.params import Point
from qverify.qcore import catalan, shapiro_check
from qverify.registry import builtin_identities, builtin_specializations, lookup
from qverify.series import eval_phi, eval_phi_direct, iter_terms
from qverify.verifier import (
    FAIL,
    PASS,
    SampleConfig,
    reports_to_json,
    standard_mutations,
    verify_all,
)

DEFAULTS = SampleConfig()


def report(capsys, code, ok, detail):
    with capsys.disabled():
        print(f"\n[{'PASS' if ok else 'FAIL'}] {code} {detail}")
    assert ok, f"{code}: {detail}"


@pytest.fixture(scope="module")
def default_run():
    identities = builtin_identities()
    reports = verify_all(identities, builtin_specializations(), DEFAULTS, workers=1)
    return {r.identity: r for r in reports}, reports


def test_ac1_registry_verification(default_run, capsys):
    by_id, _ = default_run
    ids = [i.id for i in builtin_identities()]
    bad = [i for i in ids if by_id[i].verdict != PASS or by_id[i].failures]
    ok = len(ids) == 17 and not bad
    report(capsys, "AC1", ok, f"registry: {17 - len(bad)}/17 identities PASS at seed 42, n=0..6, 25 samples")


def test_ac2_specializations(default_run, capsys):
    by_id, _ = default_run
    labels = [f"{l.general_id}->{l.special_id}" for l in builtin_specializations()]
    bad = [l for l in labels if by_id[l].verdict != PASS]
    ok = len(labels) == 8 and not bad
    report(capsys, "AC2", ok, f"specializations: {8 - len(bad)}/8 links PASS {bad or ''}".rstrip())


def test_ac3_oracle_point(capsys):
    ident = lookup("andrews_sum")
    pt = Point(2, 1, 0, {"a": 3, "b": 5})
    spec = ident.lhs.spec
    by_terms = sum(iter_terms(spec, pt))
    values = {
        "running-product sum": eval_phi(spec, pt),
        "direct term sum": eval_phi_direct(spec, pt),
        "tree lhs": eval_expr(ident.lhs, pt),
        "closed form": eval_expr(ident.rhs, pt),
        "terms": by_terms,
    }
    ok = all(v == Fraction(3, 2) for v in values.values())
    report(capsys, "AC3", ok, f"oracle point p=2,a=3,b=5,n=1: lhs={values['direct term sum']} rhs={values['closed form']}")


def test_ac4_shapiro_catalan(capsys):
    shapiro_ok = all(shapiro_check(n)[0] for n in range(31))
    recurrence_ok = all(
        catalan(n + 1) == sum(catalan(i) * catalan(n - i) for i in range(n + 1)) for n in range(20)
    )
    ok = shapiro_ok and recurrence_ok and catalan(0) == 1
    report(capsys, "AC4", ok, "Shapiro identity n=0..30 and Catalan recurrence n<=20 hold exactly")


def test_ac5_mutation_kill(capsys):
    config = SampleConfig(n_min=2, n_max=2, samples_per_n=5)
    survivors, total = [], 0
    for ident in builtin_identities():
        mutants = standard_mutations(ident)
        total += len(mutants)
        reports = verify_all(mutants, [], config)
        survivors += [r.identity for r in reports if r.verdict != FAIL]
    report(capsys, "AC5", not survivors, f"mutation kill: {total - len(survivors)}/{total} mutants FAIL {survivors or ''}".rstrip())


def test_ac6_relations_over_k(default_run, capsys):
    by_id, _ = default_run
    relations = [lookup("rel_b"), lookup("rel_c")]
    assert all(r.uses_k for r in relations)
    per_n = {r.id: [t.n for t in by_id[r.id].per_n] for r in relations}
    ok = all(by_id[r.id].verdict == PASS and per_n[r.id] == list(range(7)) for r in relations)
    report(capsys, "AC6", ok, "rel_b and rel_c PASS for every k=0..n at each sampled point, n=0..6")


def test_ac7_determinism(default_run, capsys):
    _, reports = default_run
    first = reports_to_json(reports)
    again = reports_to_json(verify_all(builtin_identities(), builtin_specializations(), DEFAULTS, workers=1))
    parallel = reports_to_json(verify_all(builtin_identities(), builtin_specializations(), DEFAULTS, workers=2))
    ok = first.encode() == again.encode() == parallel.encode()
    report(capsys, "AC7", ok, "structured reports byte-identical across runs and worker counts")


def test_ac8_round_trip(capsys):
    builtins = builtin_identities()
    once = serialize_identities(builtins)
    twice = serialize_identities(parse_identities(once).identities)
    corpus = parse_identities(resources.files("qverify").joinpath("data/builtin.qid").read_text())
    ok = once == twice and corpus.identities == builtins and not corpus.diagnostics
    report(capsys, "AC8", ok, "idlang serialize/parse idempotent; .qid corpus equals the builtin registry")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))

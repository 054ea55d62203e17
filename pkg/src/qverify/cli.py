"""Command-line front end: ``qverify list | eval | verify | verify-all | shapiro | export``.

Exit status: 0 when everything passes, 1 on any FAIL, 2 on usage or parse
errors and INCONCLUSIVE verdicts.
"""

import argparse
import logging
import os
import sys

from .closedform import eval_expr
from .idlang import ParseError, load, serialize_identities
from .params import Point
from .qcore import ZeroDenominator, as_rat, shapiro_check
from .registry import builtin_identities, builtin_specializations
from .verifier import (
    FAIL,
    INCONCLUSIVE,
    PASS,
    SampleConfig,
    confidence_note,
    format_table,
    reports_to_json,
    verify_all,
    verify_identity,
    worst_verdict,
)

EXIT = {PASS: 0, FAIL: 1, INCONCLUSIVE: 2}


class UsageError(Exception):
    pass


def _default_seed():
    raw = os.environ.get("QVERIFY_SEED")
    if raw is None:
        return SampleConfig.seed
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"QVERIFY_SEED must be an integer, got {raw!r}") from None


def build_parser():
    parser = argparse.ArgumentParser(
        prog="qverify",
        description="Exact randomized verification of terminating q-series identities.",
    )
    parser.add_argument("--qid", action="append", default=[], metavar="PATH",
                        help="load extra identities from a .qid file (repeatable)")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command")

    sub.add_parser("list", help="list identities and specialization links")

    p_eval = sub.add_parser("eval", help="evaluate both sides at one point")
    p_eval.add_argument("--identity", required=True)
    p_eval.add_argument("--point", required=True, help="e.g. p=2,a=3,b=5,n=1")

    def sampling(p):
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--n-min", type=int, default=SampleConfig.n_min)
        p.add_argument("--n-max", type=int, default=SampleConfig.n_max)
        p.add_argument("--samples", type=int, default=SampleConfig.samples_per_n)
        p.add_argument("--numerator-bound", type=int, default=SampleConfig.numerator_bound)
        p.add_argument("--denominator-bound", type=int, default=SampleConfig.denominator_bound)
        p.add_argument("--max-resamples", type=int, default=SampleConfig.max_resamples)
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--format", choices=("table", "structured"), default="table")
        p.add_argument("--output", metavar="PATH", help="also write the structured report here")
        p.add_argument("--confidence", action="store_true", help="print the sampling confidence note")

    p_verify = sub.add_parser("verify", help="verify selected identities")
    p_verify.add_argument("--identity", action="append", required=True)
    sampling(p_verify)

    p_all = sub.add_parser("verify-all", help="verify every identity and specialization link")
    sampling(p_all)

    p_shapiro = sub.add_parser("shapiro", help="check the Catalan convolution identity")
    p_shapiro.add_argument("--n-max", type=int, default=30)

    sub.add_parser("export", help="print all identities in .qid form")
    return parser


def parse_point(text):
    values = {}
    for item in filter(None, (s.strip() for s in text.split(","))):
        name, sep, raw = item.partition("=")
        if not sep:
            raise UsageError(f"point entries look like name=value, got {item!r}")
        try:
            values[name.strip()] = as_rat(raw.strip())
        except (ValueError, ZeroDivisionError):
            raise UsageError(f"not a rational number: {raw!r}") from None
    if "p" not in values:
        raise UsageError("point needs p (q is p^2)")
    p = values.pop("p")
    n = values.pop("n", 0)
    k = values.pop("k", 0)
    for name, value in (("n", n), ("k", k)):
        if value.denominator != 1 or value < 0:
            raise UsageError(f"{name} must be a non-negative integer")
    try:
        return Point(p, int(n), int(k), values).check()
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _config(args):
    seed = args.seed if args.seed is not None else _default_seed()
    try:
        return SampleConfig(
            seed=seed,
            n_min=args.n_min,
            n_max=args.n_max,
            samples_per_n=args.samples,
            numerator_bound=args.numerator_bound,
            denominator_bound=args.denominator_bound,
            max_resamples=args.max_resamples,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _identities(args):
    identities = builtin_identities()
    known = {i.id for i in identities}
    for path in args.qid:
        try:
            doc = load(path)
        except OSError as exc:
            raise UsageError(f"cannot read {path}: {exc}") from None
        except ParseError as exc:
            raise UsageError(f"{path}:{exc}") from None
        for ident in doc.identities:
            if ident.id in known:
                raise UsageError(f"{path}: identity {ident.id!r} already defined")
            known.add(ident.id)
            identities.append(ident)
    return identities


def _select(identities, ids):
    by_id = {i.id: i for i in identities}
    unknown = [i for i in ids if i not in by_id]
    if unknown:
        raise UsageError(f"unknown identity id(s): {', '.join(unknown)}")
    return [by_id[i] for i in ids]


def _emit(reports, args, out, selected=()):
    structured = reports_to_json(reports)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(structured + "\n")
    if args.format == "structured":
        out.write(structured + "\n")
    else:
        out.write(format_table(reports) + "\n")
    if args.confidence:
        config = _config(args)
        for ident in selected:
            out.write(confidence_note(ident, config) + "\n")
    return EXIT[worst_verdict(reports)]


def cmd_list(identities, out):
    width = max(len(i.id) for i in identities)
    for ident in identities:
        out.write(f"{ident.id.ljust(width)}  vars {' '.join(ident.variables):<10} {ident.provenance}\n")
    out.write("\nspecializations:\n")
    for link in builtin_specializations():
        out.write(f"  {link.general_id} -> {link.special_id}: {link.description}\n")
    return 0


def cmd_eval(identities, args, out):
    (ident,) = _select(identities, [args.identity])
    pt = parse_point(args.point)
    missing = set(ident.variables) - set(pt.vars)
    if missing:
        raise UsageError(f"point is missing {', '.join(sorted(missing))}")
    out.write(f"point: {pt}  (q = p^2 = {pt.q})\n")
    try:
        lhs = eval_expr(ident.lhs, pt, "lhs")
        rhs = eval_expr(ident.rhs, pt, "rhs")
    except ZeroDenominator as exc:
        out.write(f"pole: {exc.where()}\n")
        return 2
    out.write(f"lhs = {lhs}\nrhs = {rhs}\n")
    out.write(f"equal: {'yes' if lhs == rhs else 'no'}\n")
    return 0 if lhs == rhs else 1


def cmd_shapiro(args, out):
    if args.n_max < 0:
        raise UsageError("--n-max must be >= 0")
    ok = True
    for n in range(args.n_max + 1):
        holds, lhs, rhs = shapiro_check(n)
        ok &= holds
        out.write(f"n={n}  {'PASS' if holds else 'FAIL'}  lhs={lhs}  rhs={rhs}\n")
    out.write(f"shapiro: {'PASS' if ok else 'FAIL'}\n")
    return 0 if ok else 1


def run(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR)
    try:
        identities = _identities(args)
        if args.command is None:
            cmd_list(identities, out)
            out.write("\n" + parser.format_usage())
            return 0
        if args.command == "list":
            return cmd_list(identities, out)
        if args.command == "eval":
            return cmd_eval(identities, args, out)
        if args.command == "shapiro":
            return cmd_shapiro(args, out)
        if args.command == "export":
            out.write(serialize_identities(identities))
            return 0
        config = _config(args)
        if args.workers < 1:
            raise UsageError("--workers must be >= 1")
        if args.command == "verify":
            selected = _select(identities, args.identity)
            if args.workers > 1:
                reports = verify_all(selected, [], config, args.workers)
            else:
                reports = [verify_identity(i, config) for i in selected]
            return _emit(reports, args, out, selected)
        reports = verify_all(identities, builtin_specializations(), config, args.workers)
        return _emit(reports, args, out, identities)
    except UsageError as exc:
        err.write(f"qverify: error: {exc}\n")
        return 2


def main():
    sys.exit(run())

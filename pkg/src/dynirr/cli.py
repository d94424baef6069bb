"""Command-line frontend: census, set testing, gamma filters, enumeration, verify.

Reports are JSON on stdout with timing segregated under a "timing" key, so
determinism checks can diff everything else byte-for-byte.  Exit codes:
0 success, 1 negative verdict or failed verification, 2 usage error,
3 resource budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import random
import sys
import time

from . import __version__
from .census import census_monic, census_full, survivor_curve
from .enumr import enum_all
from .errors import DynirrError, InvalidFieldError, ResourceBudgetError
from .ff import FieldCtx, parse_field
from .multiset import (
    di_set_test,
    gamma_set,
    monic_word_uniqueness_check,
    signed_witness_check,
)
from .orbit import AlgorithmParams, definitive_depth, di_test_char, first_reducible_iterate
from .poly import is_irreducible
from .quad import format_quad, parse_quad, quad_new

EXIT_OK = 0
EXIT_VERDICT = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3

_ODD_PRIME_POWERS_101 = [
    3, 5, 7, 9, 11, 13, 17, 19, 23, 25, 27, 29, 31, 37, 41, 43, 47, 49,
    53, 59, 61, 67, 71, 73, 79, 81, 83, 89, 97, 101,
]

_SUITES = ("oracle", "bounds", "determinism", "family", "uniqueness")


def _spec_for_q(q: int) -> str:
    """Field spec string for a prime power: "p" or "p^k"."""
    for p in range(2, q + 1):
        if q % p == 0:
            k = 0
            while q % p == 0:
                q //= p
                k += 1
            if q != 1:
                raise InvalidFieldError(f"{q * p**k} is not a prime power")
            return str(p) if k == 1 else f"{p}^{k}"
    raise InvalidFieldError(f"{q} is not a prime power")


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ResourceBudgetError as exc:
        print(f"dynirr: resource budget exceeded: {exc}", file=sys.stderr)
        if exc.partial:
            print(json.dumps({"partial": exc.partial}), file=sys.stderr)
        return EXIT_RESOURCE
    except (InvalidFieldError, ValueError) as exc:
        print(f"dynirr: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DynirrError as exc:
        print(f"dynirr: {exc}", file=sys.stderr)
        return EXIT_VERDICT


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dynirr",
        description="Exact census and enumeration of dynamically irreducible quadratics over odd F_q.",
    )
    parser.add_argument("--version", action="version", version=f"dynirr {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    c = sub.add_parser("census", help="count/enumerate dynamically irreducible quadratics")
    c.add_argument("--field", required=True, help="field spec: p or p^k (odd)")
    c.add_argument("--count-only", action="store_true", help="report counts only")
    c.add_argument("--emit", metavar="FILE", help="write the full polynomial stream here")
    c.add_argument("--k-depth", type=int, default=None, help="stage-1 filter depth override")
    c.add_argument("--jobs", type=int, default=None, help="worker processes (default: all cores)")
    c.add_argument("--format", choices=("json", "csv"), default="json")
    c.add_argument("--survivors-only", action="store_true", help="run stage 1 only (survivor curve)")
    c.set_defaults(func=cmd_census)

    t = sub.add_parser("test-set", help="exact dynamical-irreducibility test for a set")
    t.add_argument("--field", required=True)
    t.add_argument("--polys", required=True, metavar="FILE", help="one 'a,b,c' per line")
    t.set_defaults(func=cmd_test_set)

    g = sub.add_parser("gamma", help="pairwise nonsquare filter set for two quadratics")
    g.add_argument("--field", required=True)
    g.add_argument("--f1", required=True, metavar="a,b,c")
    g.add_argument("--f2", required=True, metavar="a,b,c")
    g.add_argument("--depth", type=int, default=None)
    g.set_defaults(func=cmd_gamma)

    e = sub.add_parser("enum-sets", help="enumerate dynamically irreducible r-sets")
    e.add_argument("--field", required=True)
    e.add_argument("-r", type=int, required=True, dest="r")
    e.add_argument("--emit", metavar="FILE")
    e.add_argument("--budget", type=int, default=None, help="character-test budget")
    e.add_argument("--oracle-check", action="store_true", help="dense-oracle audit of emitted sets")
    e.set_defaults(func=cmd_enum_sets)

    v = sub.add_parser("verify", help="run built-in verification suites")
    v.add_argument("--level", choices=("desk", "full"), default="desk")
    v.add_argument("--suite", choices=_SUITES, default=None, help="run a single suite")
    v.add_argument("--field", default=None, help="restrict suites to one field")
    v.add_argument("--seed", type=int, default=2024)
    v.add_argument("--jobs", type=int, default=None)
    v.set_defaults(func=cmd_verify)
    return parser


def _report(command: str, ctx: FieldCtx | None, config: dict, result: dict, timing: dict) -> dict:
    if ctx is not None:
        config = dict(config)
        config["field"] = {
            "p": ctx.p,
            "k": ctx.k,
            "q": ctx.q,
            "modulus": ctx.modulus_str() or None,
        }
    return {
        "tool": "dynirr",
        "version": __version__,
        "command": command,
        "config": config,
        "result": result,
        "timing": timing,
    }


def _print_json(obj: dict) -> None:
    print(json.dumps(obj, indent=2, sort_keys=True))


def _default_jobs(value) -> int:
    if value is not None:
        if value < 1:
            raise ValueError("--jobs must be >= 1")
        return value
    return os.cpu_count() or 1


def cmd_census(args) -> int:
    ctx = parse_field(args.field)
    jobs = _default_jobs(args.jobs)
    params = AlgorithmParams(filter_depth=args.k_depth)
    t0 = time.perf_counter()
    if args.survivors_only:
        q, survivors = survivor_curve(ctx, params, jobs=jobs)
        elapsed = time.perf_counter() - t0
        result = {
            "q": q,
            "stage1_survivors": survivors,
            "survivor_ratio": survivors / (q**1.5 * math.log(q)),
        }
        if args.format == "csv":
            print("q,stage1_survivors")
            print(f"{q},{survivors}")
        else:
            _print_json(_report("census", ctx, _census_config(args, jobs), result, {"total": elapsed}))
        return EXIT_OK

    want_stream = args.emit is not None
    if want_stream:
        sink_rows = []
        res = census_full(ctx, params, emit=lambda f: sink_rows.append(format_quad(f)), jobs=jobs)
        with open(args.emit, "w") as fh:
            for row in sink_rows:
                fh.write(row + "\n")
    else:
        res = census_monic(ctx, params, want_list=not args.count_only, jobs=jobs)
    elapsed = time.perf_counter() - t0

    result = res.to_json()
    if not args.count_only and res.monic_list is not None and not want_stream:
        result["monic"] = [format_quad(f) for f in res.monic_list]
    if args.format == "csv":
        print("q,di_star,di,stage1_survivors,k_depth")
        print(f"{res.q},{res.di_star},{res.di},{res.stage1_survivors},{res.k_depth}")
    else:
        timing = {"total": elapsed, "wall_times": res.wall_times}
        _print_json(_report("census", ctx, _census_config(args, jobs), result, timing))
    return EXIT_OK


def _census_config(args, jobs: int) -> dict:
    return {
        "count_only": args.count_only if hasattr(args, "count_only") else None,
        "k_depth": args.k_depth,
        "jobs": jobs,
        "emit": args.emit,
        "format": args.format,
    }


def cmd_test_set(args) -> int:
    ctx = parse_field(args.field)
    with open(args.polys) as fh:
        lines = [ln.strip() for ln in fh if ln.strip() and not ln.startswith("#")]
    polys = [parse_quad(ctx, ln) for ln in lines]
    t0 = time.perf_counter()
    verdict = di_set_test(polys)
    elapsed = time.perf_counter() - t0
    result = verdict.to_json(ctx)
    result["polys"] = [format_quad(f) for f in polys]
    _print_json(_report("test-set", ctx, {"polys_file": args.polys}, result, {"total": elapsed}))
    return EXIT_OK if verdict.is_di else EXIT_VERDICT


def cmd_gamma(args) -> int:
    ctx = parse_field(args.field)
    f1 = parse_quad(ctx, args.f1)
    f2 = parse_quad(ctx, args.f2)
    t0 = time.perf_counter()
    report = gamma_set(f1, f2, args.depth)
    elapsed = time.perf_counter() - t0
    config = {"f1": format_quad(f1), "f2": format_quad(f2), "depth": args.depth}
    _print_json(_report("gamma", ctx, config, report.to_json(ctx), {"total": elapsed}))
    return EXIT_OK


def cmd_enum_sets(args) -> int:
    ctx = parse_field(args.field)
    budget = args.budget
    if budget is None and os.environ.get("DYNIRR_BUDGET"):
        budget = int(os.environ["DYNIRR_BUDGET"])
    rows: list[str] = []
    emit = (lambda members: rows.append(_set_row(members))) if args.emit else None
    t0 = time.perf_counter()
    res = enum_all(ctx, args.r, emit=emit, budget=budget, oracle_check=args.oracle_check)
    elapsed = time.perf_counter() - t0
    if args.emit:
        with open(args.emit, "w") as fh:
            for row in rows:
                fh.write(row + "\n")
    result = res.to_json()
    if res.set_list is not None and not args.emit:
        result["sets"] = [_set_row(members) for members in res.set_list]
    config = {"r": args.r, "budget": budget, "oracle_check": args.oracle_check, "emit": args.emit}
    _print_json(_report("enum-sets", ctx, config, result, {"total": elapsed}))
    return EXIT_OK


def _set_row(members) -> str:
    return ";".join(format_quad(f) for f in members)


# ---------------------------------------------------------------------------
# verify suites
# ---------------------------------------------------------------------------


def cmd_verify(args) -> int:
    jobs = _default_jobs(args.jobs)
    full = args.level == "full"
    only = args.suite
    field = args.field
    runners = {
        "oracle": lambda: _suite_oracle(
            _fields_arg(field, [3, 5, 7] if not full else [3, 5, 7, 9, 11, 13])
        ),
        "bounds": lambda: _suite_bounds(
            _fields_arg(field, [q for q in _ODD_PRIME_POWERS_101 if q <= (31 if not full else 101)])
        ),
        "determinism": lambda: _suite_determinism(int(field) if field else (101 if not full else 1009), jobs),
        "family": lambda: _suite_family(_fields_arg(field, [5, 7] if not full else [5, 7, 11, 13])),
        "uniqueness": lambda: _suite_uniqueness(args.seed),
    }
    names = [only] if only else list(runners)
    t0 = time.perf_counter()
    suites = [runners[name]() for name in names]
    elapsed = time.perf_counter() - t0
    passed = all(s["passed"] for s in suites)
    report = _report(
        "verify",
        None,
        {"level": args.level, "suite": only, "field": field, "seed": args.seed, "jobs": jobs},
        {"passed": passed, "suites": suites},
        {"total": elapsed},
    )
    _print_json(report)
    return EXIT_OK if passed else EXIT_VERDICT


def _fields_arg(field: str | None, default: list[int]) -> list[str]:
    return [field] if field else [_spec_for_q(q) for q in default]


def _suite_oracle(field_specs: list[str]) -> dict:
    failures = []
    checked = 0
    for spec in field_specs:
        ctx = parse_field(spec)
        q = ctx.q
        for a in range(1, q):
            for b in range(q):
                for c in range(q):
                    f = quad_new(ctx, a, b, c)
                    rep = di_test_char(f)
                    checked += 1
                    if rep.is_di:
                        ok = first_reducible_iterate(f, definitive_depth(f)) is None
                    else:
                        ok = first_reducible_iterate(f, rep.fail_step) == rep.fail_step
                    if not ok and len(failures) < 20:
                        failures.append({"q": q, "poly": format_quad(f), "verdict": rep.verdict})
    return {"suite": "oracle", "fields": field_specs, "checked": checked, "failures": failures, "passed": not failures}


def _suite_bounds(field_specs: list[str]) -> dict:
    failures = []
    for spec in field_specs:
        ctx = parse_field(spec)
        q = ctx.q
        base = census_monic(ctx)
        for k_depth in (1, None, 3 * base.k_depth):
            res = census_monic(ctx, AlgorithmParams(filter_depth=k_depth))
            if res.di_star != base.di_star:
                failures.append({"q": q, "reason": f"count depends on filter depth {k_depth}"})
        if base.di != (q - 1) * base.di_star:
            failures.append({"q": q, "reason": "scaling identity violated"})
        if 4 * base.di < (q - 1) ** 2:
            failures.append({"q": q, "reason": "lower bound (q-1)^2/4 violated"})
    return {"suite": "bounds", "fields": field_specs, "failures": failures, "passed": not failures}


def _suite_determinism(q: int, jobs: int) -> dict:
    ctx = parse_field(str(q))
    jobs = max(2, jobs)
    one = census_monic(ctx, want_list=True, jobs=1)
    many = census_monic(ctx, want_list=True, jobs=jobs)
    same = (
        one.di_star == many.di_star
        and one.stage1_survivors == many.stage1_survivors
        and [f.key() for f in one.monic_list] == [f.key() for f in many.monic_list]
    )
    failures = [] if same else [{"q": q, "reason": f"jobs=1 vs jobs={jobs} differ"}]
    return {"suite": "determinism", "q": q, "jobs": jobs, "failures": failures, "passed": same}


def _suite_family(field_specs: list[str]) -> dict:
    from .enumr import fixed_point_quad

    failures = []
    for spec in field_specs:
        ctx = parse_field(spec)
        q = ctx.q
        minus_one_square = not ctx.is_nonsquare(ctx.neg(1))
        for b in range(1, q):
            members = [
                fixed_point_quad(ctx, a, b)
                for a in range(1, q)
                if ctx.is_nonsquare(ctx.mul(a, b))
            ]
            verdict = di_set_test(members)
            if minus_one_square:
                if not verdict.is_di:
                    failures.append({"q": q, "b": b, "reason": "family rejected"})
            else:
                if verdict.is_di:
                    failures.append({"q": q, "b": b, "reason": "family accepted"})
                elif verdict.verdict == "fails" and not signed_witness_check(members, verdict):
                    failures.append({"q": q, "b": b, "reason": "invalid witness"})
                elif verdict.verdict == "precondition-failed":
                    bad = members[verdict.failed_index]
                    if is_irreducible(bad.dense()):
                        failures.append({"q": q, "b": b, "reason": "witness member is irreducible"})
    return {"suite": "family", "fields": field_specs, "failures": failures, "passed": not failures}


def _suite_uniqueness(seed: int) -> dict:
    ctx = parse_field("5")
    rng = random.Random(seed)
    monics = [quad_new(ctx, 1, b, c) for b in range(5) for c in range(5)]
    pairs = set()
    while len(pairs) < 20:
        g1, g2 = rng.sample(monics, 2)
        pairs.add((g1.key(), g2.key()))
    failures = []
    for k1, k2 in sorted(pairs):
        g1 = quad_new(ctx, *k1)
        g2 = quad_new(ctx, *k2)
        if not monic_word_uniqueness_check(g1, g2, 4):
            failures.append({"pair": [format_quad(g1), format_quad(g2)]})
    return {"suite": "uniqueness", "pairs": 20, "failures": failures, "passed": not failures}


if __name__ == "__main__":
    sys.exit(main())

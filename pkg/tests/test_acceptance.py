"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -s` to see the per-criterion lines
and the monitored telemetry (criterion 10) on the console.
"""

import math
import os
import random
import time
from itertools import product

from dynirr import (
    AlgorithmParams,
    FieldCtx,
    brute_force_sets,
    census_monic,
    di_set_test,
    di_test_char,
    enum_all,
    gamma_set,
    monic_word_uniqueness_check,
    quad_new,
    scale,
    survivor_curve,
)
from dynirr.enumr import dense_word_expansion, fixed_point_quad, set_key
from dynirr.multiset import signed_witness_check
from dynirr.orbit import definitive_depth, first_reducible_iterate
from dynirr.poly import is_irreducible
from dynirr.quad import format_quad

ODD_PRIME_POWERS_101 = [
    3, 5, 7, 9, 11, 13, 17, 19, 23, 25, 27, 29, 31, 37, 41, 43, 47, 49,
    53, 59, 61, 67, 71, 73, 79, 81, 83, 89, 97, 101,
]

FIELD_BY_Q = {3: (3, 1), 5: (5, 1), 7: (7, 1), 9: (3, 2), 11: (11, 1), 13: (13, 1),
              25: (5, 2), 27: (3, 3), 49: (7, 2), 81: (3, 4), 121: (11, 2)}


def make_ctx(q):
    if q in FIELD_BY_Q:
        return FieldCtx(*FIELD_BY_Q[q])
    return FieldCtx(q)


def report(n, ok, detail):
    print(f"ACCEPTANCE {n}: {'PASS' if ok else 'FAIL'} - {detail}")


def test_criterion_01_oracle_equivalence():
    """Character test == definitive dense oracle for every quadratic, q <= 13."""
    t0 = time.perf_counter()
    failures = []
    checked = 0
    for q in (3, 5, 7, 9, 11, 13):
        ctx = make_ctx(q)
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
                    if not ok:
                        failures.append((q, f.key(), rep.verdict))
    elapsed = time.perf_counter() - t0
    ok = not failures and elapsed < 300
    report(1, ok, f"{checked} quadratics over q in 3..13, {len(failures)} mismatches, {elapsed:.1f}s")
    assert not failures, failures[:5]
    assert elapsed < 300


def test_criterion_02_census_identity_and_k_independence():
    t0 = time.perf_counter()
    failures = []
    for q in ODD_PRIME_POWERS_101:
        ctx = make_ctx(q)
        base = census_monic(ctx)
        if base.di != (q - 1) * base.di_star:
            failures.append((q, "identity"))
        for depth in (1, 3 * base.k_depth):
            res = census_monic(ctx, AlgorithmParams(filter_depth=depth))
            if res.di_star != base.di_star:
                failures.append((q, f"K={depth}"))
    elapsed = time.perf_counter() - t0
    ok = not failures and elapsed < 60
    report(2, ok, f"{len(ODD_PRIME_POWERS_101)} fields, K in {{1, default, 3*default}}, {elapsed:.1f}s")
    assert not failures, failures
    assert elapsed < 60


def test_criterion_03_lower_bound():
    t0 = time.perf_counter()
    failures = []
    for q in ODD_PRIME_POWERS_101:
        res = census_monic(make_ctx(q))
        if 4 * res.di < (q - 1) ** 2:
            failures.append(q)
    elapsed = time.perf_counter() - t0
    ok = not failures and elapsed < 120
    report(3, ok, f"(q-1)^2/4 <= DI_q for q in 3..101, {elapsed:.1f}s")
    assert not failures, failures
    assert elapsed < 120


def test_criterion_04_q3_ground_truth():
    ctx = FieldCtx(3)
    # independent re-derivation with the factorization oracle
    derived = []
    for b in range(3):
        for c in range(3):
            f = quad_new(ctx, 1, b, c)
            if first_reducible_iterate(f, definitive_depth(f)) is None:
                derived.append((1, b, c))
    res = census_monic(ctx, want_list=True)
    got = [f.key() for f in res.monic_list]
    ok = derived == [(1, 0, 1)] and got == derived and res.di_star == 1 and res.di == 2
    report(4, ok, f"DI_3* = {res.di_star} ({got}), DI_3 = {res.di}")
    assert ok


def test_criterion_05_fixed_point_families():
    t0 = time.perf_counter()
    failures = []
    for q in (5, 13):
        ctx = make_ctx(q)
        for b in range(1, q):
            members = [
                fixed_point_quad(ctx, a, b)
                for a in range(1, q)
                if ctx.is_nonsquare(ctx.mul(a, b))
            ]
            if len(members) != (q - 1) // 2 or not di_set_test(members).is_di:
                failures.append((q, b, "family not DI"))
    for q in (7, 11):
        ctx = make_ctx(q)
        for b in range(1, q):
            members = [
                fixed_point_quad(ctx, a, b)
                for a in range(1, q)
                if ctx.is_nonsquare(ctx.mul(a, b))
            ]
            v = di_set_test(members)
            if v.is_di:
                failures.append((q, b, "family accepted"))
            elif v.verdict == "fails":
                if not signed_witness_check(members, v):
                    failures.append((q, b, "bad word witness"))
            elif v.verdict == "precondition-failed":
                if is_irreducible(members[v.failed_index].dense()):
                    failures.append((q, b, "witness member irreducible"))
    elapsed = time.perf_counter() - t0
    ok = not failures
    report(5, ok, f"families over q in {{5,13}} pass, q in {{7,11}} rejected with witness, {elapsed:.1f}s")
    assert not failures, failures


def test_criterion_06_rset_oracle_equality():
    t0 = time.perf_counter()
    findings = []
    for q in (3, 5):
        ctx = FieldCtx(q)
        res = enum_all(ctx, 2)
        truth = brute_force_sets(ctx, 2, 4)
        emitted = {set_key(s) for s in res.set_list}
        expected = {set_key(s) for s in truth}
        if emitted != expected:
            # audit invariant holds (enum_all re-checks emissions), so any
            # difference is a decomposition finding; dense-confirm witnesses
            for key in sorted(emitted ^ expected):
                members = [quad_new(ctx, *k) for k in key]
                confirmed = all(
                    is_irreducible(dense_word_expansion(members, w))
                    for n in range(1, 5)
                    for w in product(range(2), repeat=n)
                )
                findings.append((q, key, "missing" if key in expected else "extra", confirmed))
    elapsed = time.perf_counter() - t0
    ok = not findings and elapsed < 600
    report(6, ok, f"enum_all(q,2) == brute force at q in {{3,5}}, {elapsed:.1f}s"
           + (f"; findings: {findings}" if findings else ""))
    assert not findings, findings
    assert elapsed < 600


def test_criterion_07_word_uniqueness():
    ctx = FieldCtx(5)
    rng = random.Random(2024)
    monics = [quad_new(ctx, 1, b, c) for b in range(5) for c in range(5)]
    pairs = set()
    while len(pairs) < 20:
        g1, g2 = rng.sample(monics, 2)
        pairs.add((g1.key(), g2.key()))
    failures = [
        pair
        for pair in sorted(pairs)
        if not monic_word_uniqueness_check(quad_new(ctx, *pair[0]), quad_new(ctx, *pair[1]), 4)
    ]
    ok = not failures
    report(7, ok, f"20 random monic pairs over F_5, words of length <= 4 all distinct")
    assert not failures, failures


def test_criterion_08_scaling_invariance():
    t0 = time.perf_counter()
    failures = []
    for q in (3, 5, 7):
        ctx = FieldCtx(q)
        for a in range(1, q):
            for b in range(q):
                for c in range(q):
                    f = quad_new(ctx, a, b, c)
                    v = di_test_char(f).verdict
                    for u in range(1, q):
                        if di_test_char(scale(f, u)).verdict != v:
                            failures.append((q, f.key(), u))
    elapsed = time.perf_counter() - t0
    ok = not failures
    report(8, ok, f"DI status scaling-invariant, exhaustive q in {{3,5,7}}, {elapsed:.1f}s")
    assert not failures, failures[:5]


def test_criterion_09_parallel_determinism_q1009():
    ctx = FieldCtx(1009)
    jobs = max(2, min(4, os.cpu_count() or 1))
    t0 = time.perf_counter()
    one = census_monic(ctx, want_list=True, jobs=1)
    many = census_monic(ctx, want_list=True, jobs=jobs)
    elapsed = time.perf_counter() - t0
    same = (
        one.di_star == many.di_star
        and one.di == many.di
        and one.stage1_survivors == many.stage1_survivors
        and [f.key() for f in one.monic_list] == [f.key() for f in many.monic_list]
    )
    if elapsed > 900:
        print(f"ACCEPTANCE 9: WARN - census at q=1009 took {elapsed:.0f}s (soft gate 900s)")
    report(9, same, f"q=1009 jobs=1 vs jobs={jobs} identical (DI* = {one.di_star}), {elapsed:.1f}s")
    assert same


def test_criterion_10_scaling_telemetry():
    # monitored, non-blocking: values are printed for the run report
    lines = []
    for q in (101, 211, 401, 1009):
        ctx = FieldCtx(q)
        _, survivors = survivor_curve(ctx)
        ratio = survivors / (q**1.5 * math.log(q))
        res = census_monic(ctx)
        orbit_ratio = res.telemetry["max_orbit"] / math.ceil(q**0.75)
        lines.append(
            f"q={q}: survivors={survivors} survivors/(q^1.5 ln q)={ratio:.4f} "
            f"max_orbit={res.telemetry['max_orbit']} orbit/q^0.75={orbit_ratio:.3f}"
        )
    # gamma filter sizes for random DI pairs (the bound is an upper bound;
    # the per-depth decay profile is the informative part)
    rng = random.Random(1009)
    ctx = FieldCtx(101)
    monic = census_monic(ctx, want_list=True).monic_list
    di = [scale(g, u) for g in monic for u in (1, 2, 3)]
    probes = 0
    while probes < 5:
        f1, f2 = rng.sample(di, 2)
        from dynirr.multiset import proportional

        if proportional(f1, f2) is not None:
            continue
        probes += 1
        rep = gamma_set(f1, f2)
        bound = math.sqrt(101) * math.log(101) ** 2
        assert len(rep.gamma_set) <= bound  # monitored; trivially wide here
        lines.append(
            f"gamma({format_quad(f1)} | {format_quad(f2)}): size={len(rep.gamma_set)} "
            f"per-depth={rep.sizes_per_depth} sqrt(q)(log q)^2={bound:.1f}"
        )
    for line in lines:
        print("TELEMETRY " + line)
    report(10, True, f"telemetry recorded for {len(lines)} probes (monitored, non-blocking)")
    assert len(lines) >= 4

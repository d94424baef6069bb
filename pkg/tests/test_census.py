from dynirr import (
    AlgorithmParams,
    FieldCtx,
    census_full,
    census_monic,
    di_test_char,
    full_di_list,
    quad_new,
    survivor_curve,
)
from dynirr.orbit import definitive_depth, first_reducible_iterate

SMALL_SPECS = [(3, 1), (5, 1), (7, 1), (3, 2), (11, 1), (13, 1)]


def test_q3_ground_truth(f3):
    # re-derive DI_3* with the dense factorization oracle before comparing
    expected = []
    for b in range(3):
        for c in range(3):
            f = quad_new(f3, 1, b, c)
            if first_reducible_iterate(f, definitive_depth(f)) is None:
                expected.append((1, b, c))
    assert expected == [(1, 0, 1)]
    res = census_monic(f3, want_list=True)
    assert res.di_star == 1
    assert res.di == 2
    assert [f.key() for f in res.monic_list] == expected


def test_monic_list_matches_oracle_small():
    for p, k in ((3, 1), (5, 1), (7, 1), (3, 2), (11, 1), (13, 1)):
        ctx = FieldCtx(p, k)
        oracle = set()
        for b in range(ctx.q):
            for c in range(ctx.q):
                f = quad_new(ctx, 1, b, c)
                if first_reducible_iterate(f, definitive_depth(f)) is None:
                    oracle.add((1, b, c))
        res = census_monic(ctx, want_list=True)
        assert {f.key() for f in res.monic_list} == oracle


def test_scaling_identity_and_lower_bound():
    for p, k in SMALL_SPECS:
        ctx = FieldCtx(p, k)
        res = census_monic(ctx)
        q = ctx.q
        assert res.di == (q - 1) * res.di_star
        assert 4 * res.di >= (q - 1) ** 2
        assert res.stage1_survivors >= res.di_star


def test_k_independence():
    for p, k in SMALL_SPECS:
        ctx = FieldCtx(p, k)
        base = census_monic(ctx)
        for depth in (1, 3 * base.k_depth):
            res = census_monic(ctx, AlgorithmParams(filter_depth=depth))
            assert res.di_star == base.di_star
        low = census_monic(ctx, AlgorithmParams(filter_depth=1))
        assert low.stage1_survivors >= base.stage1_survivors


def test_full_stream(f5):
    polys = full_di_list(f5)
    res = census_monic(f5)
    assert len(polys) == (5 - 1) * res.di_star == res.di
    assert len({f.key() for f in polys}) == len(polys)
    for f in polys:
        assert di_test_char(f).is_di
    monic = [f for f in polys if f.is_monic]
    assert len(monic) == res.di_star


def test_full_stream_deterministic(f5):
    a = [f.key() for f in full_di_list(f5)]
    b = [f.key() for f in full_di_list(f5)]
    assert a == b


def test_census_full_emits_in_sink_order(f3):
    rows = []
    res = census_full(f3, emit=rows.append)
    assert len(rows) == res.di == 2
    assert {f.key() for f in rows} == {(1, 0, 1), (2, 0, 2)}


def test_survivor_curve_bounds():
    for q in (7, 13, 101):
        ctx = FieldCtx(q)
        qq, survivors = survivor_curve(ctx)
        assert qq == q
        assert survivors <= q * q
        assert survivors >= census_monic(ctx).di_star


def test_jobs_determinism_q101():
    ctx = FieldCtx(101)
    one = census_monic(ctx, want_list=True, jobs=1)
    two = census_monic(ctx, want_list=True, jobs=2)
    assert one.di_star == two.di_star
    assert one.stage1_survivors == two.stage1_survivors
    assert [f.key() for f in one.monic_list] == [f.key() for f in two.monic_list]


def test_jobs_exceeding_field_size(f3):
    # worker count is capped by the b-range; results stay identical
    one = census_monic(f3, want_list=True, jobs=1)
    many = census_monic(f3, want_list=True, jobs=8)
    assert one.di_star == many.di_star == 1
    assert [f.key() for f in one.monic_list] == [f.key() for f in many.monic_list]


def test_extension_field_census(f9):
    res = census_monic(f9, want_list=True)
    assert res.di == 8 * res.di_star
    for f in res.monic_list:
        assert di_test_char(f).is_di
    # monic list is sorted by (b, c)
    keys = [f.key() for f in res.monic_list]
    assert keys == sorted(keys)


def test_wall_times_present(f5):
    res = census_monic(f5)
    assert set(res.wall_times) == {"stage1", "stage2", "total"}
    assert res.telemetry["survivor_ratio"] >= 0


def test_stage1_vectorized_matches_scalar_reference():
    # the numpy kernel against the generic per-element walk, same field
    from dynirr.census import _stage1_generic, _stage1_prime

    for q, k_depth in ((13, 4), (101, 5)):
        ctx = FieldCtx(q)
        assert _stage1_prime(ctx, k_depth, 0, q) == _stage1_generic(ctx, k_depth, 0, q)


def test_stage1_never_drops_di_polys_q101():
    # unfiltered exact walks over the whole monic grid == census output
    ctx = FieldCtx(101)
    direct = [
        (b, c)
        for b in range(101)
        for c in range(101)
        if di_test_char(quad_new(ctx, 1, b, c)).is_di
    ]
    res = census_monic(ctx, want_list=True)
    assert [(f.b, f.c) for f in res.monic_list] == direct


def test_singleton_set_test_count_matches_census():
    # third route to DI_q: closure-based singleton tests over all quadratics
    from dynirr import di_set_test
    from dynirr.quad import is_irreducible_quad

    for q in (5, 7):
        ctx = FieldCtx(q)
        n = 0
        for a in range(1, q):
            for b in range(q):
                for c in range(q):
                    f = quad_new(ctx, a, b, c)
                    if is_irreducible_quad(f) and di_set_test([f]).is_di:
                        n += 1
        assert n == census_monic(ctx).di


def test_capped_walk_matches_exact_at_reference_cap():
    # walking ceil(q^(3/4)) distinct values suffices empirically at these q
    from dynirr.orbit import orbit_reference_cap

    for q in (13, 101):
        ctx = FieldCtx(q)
        cap = AlgorithmParams(orbit_cap=orbit_reference_cap(q))
        for b in range(q):
            for c in range(q):
                f = quad_new(ctx, 1, b, c)
                assert di_test_char(f, cap).is_di == di_test_char(f).is_di

import pytest

from dynirr import ContextMismatchError, FieldCtx, InvalidFieldError, parse_field

SMALL_FIELDS = [(3, 1), (5, 1), (7, 1), (3, 2), (11, 1), (13, 1), (5, 2), (3, 3)]


def small_ctxs():
    return [FieldCtx(p, k) for p, k in SMALL_FIELDS]


def test_prime_field_has_no_modulus(f3):
    assert (f3.p, f3.k, f3.q) == (3, 1, 3)
    assert f3.modulus is None


def test_even_characteristic_rejected():
    with pytest.raises(InvalidFieldError):
        FieldCtx(2)
    with pytest.raises(InvalidFieldError):
        FieldCtx(2, 5)


def test_composite_characteristic_rejected():
    for bad in (1, 4, 9, 15, 21):
        with pytest.raises(InvalidFieldError):
            FieldCtx(bad)


def test_degree_below_one_rejected():
    with pytest.raises(InvalidFieldError):
        FieldCtx(3, 0)


def test_oversized_field_rejected():
    # 2^31-1 is prime; squaring it blows the machine-word cap
    with pytest.raises(InvalidFieldError):
        FieldCtx(2147483647, 2)


def test_f9_modulus_is_first_irreducible(f9):
    # independent derivation: first monic quadratic over F_3, in base-3
    # coefficient order, without a root
    expected = None
    for enc in range(9):
        c0, c1 = enc % 3, enc // 3
        if all((x * x + c1 * x + c0) % 3 != 0 for x in range(3)):
            expected = (c0, c1, 1)
            break
    assert f9.modulus == expected == (1, 0, 1)


def test_modulus_deterministic():
    assert FieldCtx(3, 2).modulus == FieldCtx(3, 2).modulus
    assert FieldCtx(5, 3).modulus == FieldCtx(5, 3).modulus


def test_inverse_examples(f5, f7):
    assert f7.inv(3) == 5 and 3 * 5 % 7 == 1
    assert f5.neg(2) == 3
    with pytest.raises(ZeroDivisionError):
        f5.inv(0)


def test_pow_zero_exponent(f7):
    for x in range(1, 7):
        assert f7.pow(x, 0) == 1


def test_context_mismatch_detected(f7):
    with pytest.raises(ContextMismatchError):
        f7.add(9, 1)
    with pytest.raises(ContextMismatchError):
        f7.mul(1, -2)
    with pytest.raises(ContextMismatchError):
        f7.add(1.5, 1)


def test_elements_order_and_count(f3, f9):
    assert list(f3.elements()) == [0, 1, 2]
    es = list(f9.elements())
    assert len(es) == len(set(es)) == 9
    assert es[0] == 0 and es[1] == 1
    assert len(list(FieldCtx(5, 2).elements())) == 25


def test_field_axioms_exhaustive():
    for ctx in (FieldCtx(5), FieldCtx(3, 2)):
        els = list(ctx.elements())
        for x in els:
            assert ctx.add(x, 0) == x
            assert ctx.mul(x, 1) == x
            assert ctx.add(x, ctx.neg(x)) == 0
            for y in els:
                assert ctx.add(x, y) == ctx.add(y, x)
                assert ctx.mul(x, y) == ctx.mul(y, x)
                for z in els:
                    assert ctx.mul(x, ctx.add(y, z)) == ctx.add(
                        ctx.mul(x, y), ctx.mul(x, z)
                    )


def test_inv_involution_exhaustive():
    for ctx in small_ctxs():
        if ctx.q > 27:
            continue
        for x in range(1, ctx.q):
            assert ctx.inv(ctx.inv(x)) == x
            assert ctx.mul(x, ctx.inv(x)) == 1


def test_nonsquare_examples(f3, f7):
    # squares mod 3 are {0, 1}; mod 7 they are {0, 1, 2, 4}
    assert {x * x % 3 for x in range(3)} == {0, 1}
    assert f3.is_nonsquare(2)
    assert not f3.is_nonsquare(0)
    assert {x * x % 7 for x in range(7)} == {0, 1, 2, 4}
    assert f7.is_nonsquare(3)


def test_nonsquare_census():
    # exactly (q-1)/2 nonsquares in every odd field
    for spec in ("3", "5", "7", "3^2", "11", "13", "5^2", "3^3"):
        ctx = parse_field(spec)
        n = sum(1 for x in ctx.elements() if ctx.is_nonsquare(x))
        assert n == (ctx.q - 1) // 2, spec


def test_character_multiplicativity():
    for ctx in small_ctxs():
        if ctx.q > 27:
            continue
        for x in range(1, ctx.q):
            for y in range(1, ctx.q):
                assert ctx.is_nonsquare(ctx.mul(x, y)) == (
                    ctx.is_nonsquare(x) != ctx.is_nonsquare(y)
                )


def test_nonsquare_matches_power_definition():
    for ctx in (FieldCtx(13), FieldCtx(3, 2)):
        minus_one = ctx.neg(1)
        for x in ctx.elements():
            assert ctx.is_nonsquare(x) == (ctx.pow(x, (ctx.q - 1) // 2) == minus_one)


def test_coords_roundtrip(f9):
    for x in f9.elements():
        assert f9.from_coords(f9.coords(x)) == x
    assert f9.coords(0) == (0, 0)
    assert f9.coords(1) == (1, 0)


def test_sqrt_table():
    for ctx in (FieldCtx(11), FieldCtx(3, 2)):
        for x in ctx.elements():
            r = ctx.sqrt(x)
            if r is None:
                assert ctx.is_nonsquare(x)
            else:
                assert ctx.mul(r, r) == x


def test_element_serialization(f7, f9):
    assert f7.format_element(5) == "5"
    assert f7.parse_element("5") == 5
    x = f9.from_coords((1, 2))
    assert f9.format_element(x) == "1+2*t"
    assert f9.parse_element("1+2*t") == x
    assert f9.parse_element("2*t+1") == x
    assert f9.parse_element("t") == f9.from_coords((0, 1))
    for x in f9.elements():
        assert f9.parse_element(f9.format_element(x)) == x


def test_parse_field_specs():
    assert parse_field("7").q == 7
    assert parse_field("3^2").q == 9
    with pytest.raises(InvalidFieldError):
        parse_field("2")
    with pytest.raises(InvalidFieldError):
        parse_field("banana")


def test_parse_element_rejects_bad_degree(f9):
    with pytest.raises(ValueError):
        f9.parse_element("t^5")
    with pytest.raises(ValueError):
        f9.parse_element("")


def test_untabled_extension_field():
    # q = 3^7 = 2187 exceeds the table limit: digit-path arithmetic
    ctx = FieldCtx(3, 7)
    assert ctx.q == 2187
    xs = [1, 2, 5, 100, 2186, 1000]
    for x in xs:
        assert ctx.mul(x, ctx.inv(x)) == 1
        assert ctx.add(x, ctx.neg(x)) == 0
        for y in xs:
            assert ctx.mul(x, y) == ctx.mul(y, x)
            assert ctx.coords(ctx.add(x, y)) == tuple(
                (a + b) % 3 for a, b in zip(ctx.coords(x), ctx.coords(y))
            )
    n = sum(1 for x in ctx.elements() if ctx.is_nonsquare(x))
    assert n == (ctx.q - 1) // 2

import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fqip.field import FieldError, FieldSpec
from fqip.poly import (Poly, PolyError, UniverseError, canonical_index, enumerate_polys,
                       format_poly, from_index, index_add, index_neg, parse_poly, poly_divmod,
                       pretty_poly, universe_size)

from conftest import F2, F3, F4, F5, F9


def P(field, *coeffs):
    return Poly(field, coeffs)


# --- examples -----------------------------------------------------------------

def test_divmod_char2_square():
    h, r = poly_divmod(P(F2, 1, 0, 1), P(F2, 1, 1))
    assert h == P(F2, 1, 1) and r.is_zero()


def test_divmod_zero_dividend(field):
    f = P(field, 1, 1, 1)
    h, r = poly_divmod(Poly.zero(field), f)
    assert h.is_zero() and r.is_zero()


def test_divmod_f3():
    h, r = poly_divmod(P(F3, 0, 1, 0, 2), P(F3, 1, 0, 1))
    assert h == P(F3, 0, 2)
    assert r == P(F3, 0, 2)


def test_divmod_zero_divisor():
    with pytest.raises(ZeroDivisionError, match="zero divisor"):
        poly_divmod(P(F2, 1), Poly.zero(F2))


def test_enumerate_small():
    assert [format_poly(f) for f in enumerate_polys(F2, 2)] == ["0", "1", "0,1", "1,1"]
    assert [format_poly(f) for f in enumerate_polys(F3, 1)] == ["0", "1", "2"]


def test_enumerate_q2_D10():
    polys = list(enumerate_polys(F2, 10))
    assert len(polys) == 1024
    assert canonical_index(Poly.monomial(F2, 9)) == 512
    assert polys[512] == Poly.monomial(F2, 9)


def test_canonical_index_examples():
    assert canonical_index(Poly.zero(F2)) == 0
    assert canonical_index(P(F2, 1, 1)) == 3
    assert canonical_index(P(F3, 1, 0, 2)) == 19


def test_index_out_of_universe():
    with pytest.raises(UniverseError):
        canonical_index(P(F2, 0, 0, 1), D=2)


def test_universe_cap_message():
    with pytest.raises(UniverseError, match="exceeds"):
        universe_size(F2, 30)


def test_codec_exhaustive_q2_D10():
    for i, f in enumerate(enumerate_polys(F2, 10)):
        assert parse_poly(format_poly(f), F2) == f
        assert canonical_index(f) == i
        assert from_index(i, F2) == f


def test_codec_rejects_bad_tokens():
    for bad in ["", "1,,0", "a", "1,2", "-1"]:
        with pytest.raises(PolyError):
            parse_poly(bad, F2)
    assert parse_poly("1,0,0", F2) == P(F2, 1)


def test_pretty():
    assert pretty_poly(P(F2, 1, 0, 1)) == "1+X^2"
    assert pretty_poly(Poly.zero(F2)) == "0"


def test_field_validation():
    with pytest.raises(FieldError):
        FieldSpec(4)
    with pytest.raises(FieldError):
        FieldSpec(17)
    with pytest.raises(FieldError):
        FieldSpec(2, 2, (1, 0, 1))  # reducible
    assert FieldSpec.from_q(9).modulus == (2, 2, 1)
    assert FieldSpec.from_q(4).modulus == (1, 1, 1)


def test_extension_field_is_a_field(field):
    for a in range(1, field.q):
        assert field.mul(a, field.inv(a)) == 1
    # Frobenius: (a+b)^p = a^p + b^p
    for a in range(field.q):
        for b in range(field.q):
            lhs = field.element(field.add(a, b)) ** field.p
            rhs = field.element(a) ** field.p + field.element(b) ** field.p
            assert lhs == rhs


# --- ring laws on random samples ------------------------------------------------

def _rand_poly(rng, field, maxdeg=6):
    return Poly(field, [rng.randrange(field.q) for _ in range(rng.randint(0, maxdeg + 1))])


@pytest.mark.parametrize("fld", [F2, F3, F4, F5, F9], ids=["F2", "F3", "F4", "F5", "F9"])
def test_ring_laws_random(fld):
    rng = random.Random(1234 + fld.q)
    zero, one = Poly.zero(fld), Poly.one(fld)
    for _ in range(2000):  # 5 fields x 2000 = 10^4 samples
        a, b, c = (_rand_poly(rng, fld) for _ in range(3))
        assert (a + b) + c == a + (b + c)
        assert a + b == b + a
        assert (a * b) * c == a * (b * c)
        assert a * b == b * a
        assert a * (b + c) == a * b + a * c
        assert a + zero == a and a * one == a and a - a == zero
        # characteristic p
        total = zero
        for _ in range(fld.p):
            total = total + a
        assert total.is_zero()
        if not b.is_zero():
            h, r = poly_divmod(a, b)
            assert h * b + r == a
            assert r.is_zero() or r.deg < b.deg


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(0, 8), max_size=8), st.lists(st.integers(0, 8), min_size=1, max_size=5))
def test_divmod_roundtrip_F9(gc, fc):
    g, f = Poly(F9, gc), Poly(F9, fc)
    if f.is_zero():
        return
    h, r = divmod(g, f)
    assert h * f + r == g
    assert r.deg is None or r.deg < f.deg


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 5**6 - 1), st.integers(0, 5**6 - 1))
def test_index_add_matches_poly_add(i, j):
    f, g = from_index(i, F5), from_index(j, F5)
    assert index_add(i, j, 5) == canonical_index(f + g)
    assert index_neg(i, 5) == canonical_index(-f)


def test_index_add_vectorized():
    a = np.arange(81, dtype=np.int64)
    out = index_add(a, 5, 3, ndigits=4)
    for i in range(81):
        assert out[i] == canonical_index(from_index(i, F3) + from_index(5, F3))
    out4 = index_add(np.arange(16, dtype=np.int64), 7, 2, ndigits=4)
    assert list(out4) == [i ^ 7 for i in range(16)]


def test_poly_over_field_of_four():
    # t is rep 2 in F_4 with t^2 = t + 1 = rep 3
    t = Poly(F4, [2])
    assert t * t == Poly(F4, [3])
    assert canonical_index(Poly(F4, [2, 1])) == 2 + 4

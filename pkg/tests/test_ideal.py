import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from fqip.ideal import (IdealError, IdealGens, WitnessNotFound, ideal_member, ip_witness, reduce,
                        sum_subsystem)
from fqip.multipoly import MultiPoly, format_multipoly, parse_multipoly
from fqip.poly import Poly

from conftest import F2, F3, F4


def mp(field, nvars, text):
    return parse_multipoly(text, field, nvars)


def uni(field, text):
    return parse_multipoly(text, field, 1)


X = Poly(F2, [0, 1])
GX = IdealGens(((0, X),), 1)


def test_reduce_generator_and_product():
    gens = IdealGens(((0, Poly(F3, [1, 0, 1])), (1, Poly(F3, [2, 1]))), 2)
    f1, f2 = gens.as_multipolys()
    red = reduce(f1, gens)
    assert red.remainder.is_zero()
    assert red.quotients[0] == MultiPoly.constant(F3, 2, 1)
    assert reduce(f1 * f2, gens).remainder.is_zero()


def test_reduce_two_variable_example():
    gens = IdealGens(((0, X), (1, X)), 2)
    g = mp(F2, 2, "1@1,1 1@0,1 1@0,0")
    red = reduce(g, gens)
    assert red.remainder == MultiPoly.constant(F2, 2, 1)
    f1, f2 = gens.as_multipolys()
    assert f1 * red.quotients[0] + f2 * red.quotients[1] + red.remainder == g


def test_ideal_member_examples():
    assert ideal_member(MultiPoly.zero(F2, 1), GX)
    assert ideal_member(uni(F2, "0,1,1"), GX)
    assert not ideal_member(uni(F2, "1,1"), GX)


def test_uncovered_variable_rejected():
    with pytest.raises(IdealError, match="X2"):
        reduce(mp(F2, 2, "1@0,1"), IdealGens(((0, X),), 2))


def test_zero_generator_rejected():
    with pytest.raises(IdealError):
        IdealGens(((0, Poly.zero(F2)),), 1)
    with pytest.raises(IdealError):
        IdealGens(((0, X), (0, X)), 2)


def test_witness_first_term():
    seq = [uni(F2, "0,1"), uni(F2, "1,0,1")]
    w = ip_witness(seq, GX)
    assert w.indices == (1,) and w.sum == uni(F2, "0,1") and w.kind == "singleton"


def test_witness_pair_char2():
    seq = [uni(F2, "1,1"), uni(F2, "1,0,1"), uni(F2, "1,0,0,1")]
    w = ip_witness(seq, GX)
    assert w.indices == (1, 2)
    assert w.sum == uni(F2, "0,1,1")
    assert w.kind == "p-fold"


def test_witness_triple_char3():
    gens = IdealGens(((0, Poly(F3, [0, 1])),), 1)
    seq = [uni(F3, t) for t in ["1", "2", "1,1", "1,0,1", "1,0,0,1"]]
    w = ip_witness(seq, gens)
    assert w.indices == (1, 3, 4)
    assert w.sum == uni(F3, "0,1,1")
    assert ideal_member(w.sum, gens)


def test_witness_census_on_failure():
    with pytest.raises(WitnessNotFound) as exc:
        ip_witness([uni(F2, "1")], GX)
    assert exc.value.census == {"1@0": 1}
    with pytest.raises(IdealError):
        ip_witness([uni(F2, "1"), uni(F2, "1")], GX)


def test_bound_values():
    gens = IdealGens(((0, Poly(F2, [0, 1, 1])), (1, Poly(F2, [0, 1]))), 2)
    assert gens.remainder_space_size() == 4 and gens.pigeonhole_bound() == 5
    g3 = IdealGens(((0, Poly(F3, [1, 0, 1])),), 1)
    assert g3.pigeonhole_bound() == 2 * 9 + 1


# --- reduction properties ----------------------------------------------------------

def _rand_mp(rng, field, nvars, nterms=5, maxdeg=5, allowed=None):
    allowed = range(nvars) if allowed is None else allowed
    return MultiPoly(field, nvars, {
        tuple(rng.randint(0, maxdeg) if v in allowed else 0 for v in range(nvars)):
        rng.randrange(field.q) for _ in range(nterms)})


def _rand_gens(rng, field, nvars):
    vars_ = sorted(rng.sample(range(nvars), rng.randint(1, nvars)))
    pairs = []
    for v in vars_:
        d = rng.randint(1, 3)
        coeffs = [rng.randrange(field.q) for _ in range(d)] + [rng.randrange(1, field.q)]
        pairs.append((v, Poly(field, coeffs)))
    return IdealGens(tuple(pairs), nvars)


def check_reduction(g, gens):
    red = reduce(g, gens)
    total = red.remainder
    for h, f in zip(red.quotients, gens.as_multipolys()):
        total = total + f * h
    assert total == g
    for v, f in gens.gens:
        d = red.remainder.deg_in(v)
        assert d is None or d < f.deg
    return red


@pytest.mark.parametrize("fld", [F2, F3, F4])
def test_reduction_random(fld):
    rng = random.Random(99 + fld.q)
    for _ in range(300):
        nvars = rng.randint(1, 3)
        gens = _rand_gens(rng, fld, nvars)
        check_reduction(_rand_mp(rng, fld, nvars, allowed=gens.variables), gens)


def test_reduction_idempotent_and_linear():
    rng = random.Random(5)
    for _ in range(200):
        gens = _rand_gens(rng, F3, 2)
        a = _rand_mp(rng, F3, 2, allowed=gens.variables)
        b = _rand_mp(rng, F3, 2, allowed=gens.variables)
        ra = reduce(a, gens).remainder
        assert reduce(ra, gens).remainder == ra
        assert reduce(a + b, gens).remainder == ra + reduce(b, gens).remainder


@settings(max_examples=150, deadline=None)
@given(st.dictionaries(st.tuples(st.integers(0, 6), st.integers(0, 6)), st.integers(1, 2), max_size=8),
       st.lists(st.integers(0, 2), min_size=1, max_size=3), st.integers(1, 2))
def test_reduction_hypothesis(terms, gcoeffs, lead):
    g = MultiPoly(F3, 2, terms)
    gens = IdealGens(((0, Poly(F3, gcoeffs + [lead])), (1, Poly(F3, [1, 1]))), 2)
    check_reduction(g, gens)


# --- witness soundness ---------------------------------------------------------------

def _injective(rng, field, nvars, n, maxdeg=4):
    seen, out = set(), []
    while len(out) < n:
        g = _rand_mp(rng, field, nvars, nterms=rng.randint(1, 4), maxdeg=maxdeg)
        if g not in seen:
            seen.add(g)
            out.append(g)
    return out


@pytest.mark.parametrize("fld,nvars,gens", [
    (F2, 2, IdealGens(((0, Poly(F2, [0, 1, 1])), (1, Poly(F2, [0, 1]))), 2)),
    (F3, 1, IdealGens(((0, Poly(F3, [1, 0, 1])),), 1)),
    (F4, 1, IdealGens(((0, Poly(F4, [2, 1])),), 1)),
])
def test_witness_soundness(fld, nvars, gens):
    rng = random.Random(2024)
    bound = gens.pigeonhole_bound()
    for _ in range(100):
        seq = _injective(rng, fld, nvars, bound)
        w = ip_witness(seq, gens)
        assert w.scanned <= bound
        total = MultiPoly.zero(fld, nvars)
        for i in w.indices:
            total = total + seq[i - 1]
        assert total == w.sum and ideal_member(total, gens)
        assert len(w.indices) in (1, fld.p)


def test_p_copies_of_any_remainder_sum_to_zero():
    gens = IdealGens(((0, Poly(F3, [1, 0, 1])),), 1)
    rng = random.Random(3)
    for _ in range(100):
        g = _rand_mp(rng, F3, 1)
        r = reduce(g, gens).remainder
        assert (r + r + r).is_zero()


def test_sum_subsystem_closure_depth3():
    gens = IdealGens(((0, Poly(F2, [0, 1])), (1, Poly(F2, [1, 1]))), 2)
    rng = random.Random(11)
    seq = _injective(rng, F2, 2, 60)
    blocks = sum_subsystem(seq, gens, 3)
    assert len(blocks) == 3
    flat = [i for w in blocks for i in w.indices]
    assert flat == sorted(flat) and len(set(flat)) == len(flat)
    for r in range(1, 4):
        for combo in itertools.combinations(blocks, r):
            total = MultiPoly.zero(F2, 2)
            for w in combo:
                total = total + w.sum
            assert ideal_member(total, gens)


def test_multipoly_codec_roundtrip():
    g = mp(F3, 2, "2@1,0 1@0,3 1@0,0")
    assert mp(F3, 2, format_multipoly(g)) == g
    assert mp(F3, 2, "1@0,0;2@1,0;1@0,3") == g

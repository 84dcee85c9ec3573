import itertools
import math

import pytest
from hypothesis import given, strategies as st

from rockafellian.extreal import INF, NINF, ext_add, ext_neg, ext_scale, ext_sum, fmt, parse

SIGNS = [NINF, -2.5, 0.0, 3.0, INF]
finite = st.floats(allow_nan=False, allow_infinity=False, width=64)
ext = st.one_of(finite, st.sampled_from([INF, NINF]))


def test_plus_infinity_absorbs():
    assert ext_add(5, INF) == INF
    assert ext_add(NINF, INF) == INF
    assert ext_add(INF, NINF) == INF
    assert ext_add(2, 3) == 5
    assert ext_add(NINF, 7) == NINF


def test_scale_conventions():
    assert ext_scale(0, INF) == 0.0
    assert ext_scale(0, NINF) == 0.0
    assert ext_scale(2, 3.0) == 6.0
    assert ext_scale(3, NINF) == NINF
    with pytest.raises(ValueError):
        ext_scale(-1, 2.0)


def test_nan_rejected():
    with pytest.raises(ValueError):
        ext_add(math.nan, 1.0)
    with pytest.raises(ValueError):
        parse("nan")


def test_commutative_associative_exhaustive():
    # small integers keep finite sums exact, so associativity can be checked with ==
    vals = [NINF, -2.0, INF]
    for a, b, c in itertools.product(vals, repeat=3):
        assert ext_add(a, b) == ext_add(b, a)
        assert ext_add(ext_add(a, b), c) == ext_add(a, ext_add(b, c))
    for a, b in itertools.product(SIGNS, repeat=2):
        assert ext_add(a, b) == ext_add(b, a)


@given(ext, ext, ext)
def test_monotone_in_first_argument(a, b, c):
    lo, hi = min(a, b), max(a, b)
    if c != INF or (math.isfinite(lo) and math.isfinite(hi)):
        assert ext_add(lo, c) <= ext_add(hi, c)


@given(finite)
def test_text_roundtrip(a):
    assert parse(fmt(a)) == a


def test_infinite_text():
    assert fmt(INF) == "inf" and fmt(NINF) == "-inf"
    assert parse("inf") == INF and parse(" -inf ") == NINF


def test_sum_and_neg():
    assert ext_sum(1, 2, 3) == 6
    assert ext_sum(1, NINF, INF) == INF
    assert ext_neg(INF) == NINF

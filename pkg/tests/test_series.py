import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from phylogf.algebra import MultilinearElem as E
from phylogf.series import (
    NotDivisible,
    RingMismatch,
    TruncSeries as TS,
    _schoolbook,
    build_M,
    build_Mb,
    build_Mtilde,
    build_Mu,
    build_P,
    build_Phat,
    extract_full,
    iconv,
    substitute_zero,
    to_rational,
    ts_mul,
    ts_recip,
    ts_shift,
    ts_sqrt,
    ts_truncate,
)

from conftest import small_fractions

F = Fraction


def test_basic_arithmetic():
    a = TS.from_coeffs([1, 1], 2)
    b = TS.from_coeffs([1, -1], 2)
    assert (a * b).coeffs == [1, 0, -1]
    assert ts_shift(TS.from_coeffs([0, 0, 1, 1]), -2).coeffs == [1, 1]
    with pytest.raises(NotDivisible):
        ts_shift(TS.from_coeffs([1, 1]), -1)


def test_order_is_minimum():
    a = TS.from_coeffs([1, 2, 3, 4])
    b = TS.from_coeffs([1, 1])
    assert (a * b).order == 1
    assert (a + b).order == 1


def test_ring_mismatch():
    with pytest.raises(RingMismatch):
        TS.z(3) + TS.z(3, 1)


def test_recip_examples():
    assert ts_recip(TS.from_coeffs([1, -1], 6)).coeffs == [1] * 7
    y1 = E.gen(1, 1)
    r = ts_recip(1 - TS.from_coeffs([0, 1 + y1], 4))
    assert r[2] == 1 + 2 * y1
    with pytest.raises(ZeroDivisionError):
        ts_recip(TS.z(4))


def test_sqrt_examples():
    s = ts_sqrt(TS.from_coeffs([1, 0, -2], 8))
    assert s.coeffs == [1, 0, -1, 0, F(-1, 2), 0, F(-1, 2), 0, F(-5, 8)]
    assert ts_sqrt(TS.const(1, 5)).coeffs == [1, 0, 0, 0, 0, 0]
    y1 = E.gen(1, 1)
    rad = TS.from_coeffs([1, 0, -2, -4 * y1], 20)
    r = ts_sqrt(rad)
    assert r * r == rad
    with pytest.raises(ValueError):
        ts_sqrt(TS.from_coeffs([2, 1], 3))


def test_iconv_matches_schoolbook():
    rng = random.Random(7)
    for _ in range(200):
        n = rng.randint(1, 80)
        a = [rng.randint(-(10**30), 10**30) for _ in range(rng.randint(1, 60))]
        b = [rng.randint(-(10**5), 10**5) for _ in range(rng.randint(1, 60))]
        assert iconv(a, b, n) == _schoolbook(a, b, n + 1)


def test_M_expansion():
    y1 = E.gen(1, 1)
    m = build_M(9, y1)
    assert m[1] == 1
    assert m[2] == y1
    assert m[3] == F(1, 2)
    assert m[4] == F(3, 2) * y1
    assert m[8] == F(35, 8) * y1
    assert build_M(15) == ts_shift(1 - ts_sqrt(TS.from_coeffs([1, 0, -2], 16)), -1)


def test_Mb_Mu():
    y1 = E.gen(1, 1)
    assert build_Mb(5)[3] == F(1, 2)
    assert build_Mb(5)[1] == 0
    assert build_Mu(8).coeffs == [0] * 9
    assert build_Mu(5, y1)[2] == y1
    assert build_Mu(5, y1)[4] + build_Mb(5, y1)[4] == F(3, 2) * y1
    mb5 = build_Mb(7, y1)[5]
    assert mb5.constant == F(1, 2)
    assert build_M(7, y1)[5] == mb5 + build_Mu(7, y1)[5]


def test_M_is_binary_tree_counts():
    import math

    m = build_M(41)
    for n in range(42):
        v = m[n] * math.factorial(n)
        assert v.denominator == 1 and v >= 0
        if n % 2 == 0:
            assert v == 0
    assert [m[n] * math.factorial(n) for n in (1, 3, 5, 7)] == [1, 3, 60, 3150]


def test_P_examples():
    k = 3
    y = [E.gen(k, i) for i in (1, 2, 3)]
    N = 10
    assert to_rational(build_P(N)) == ts_truncate(ts_recip(1 - ts_shift(build_Mtilde(N), 1)), N)
    p = build_P(N, y[0], y[1], y[2])
    assert p[0] == 1
    assert p[1] == y[2]


def test_Phat_examples():
    y2 = E.gen(2, 2)
    N = 12
    expected = ts_truncate(ts_recip(1 - ts_shift(build_M(N, y2), 1)), N)
    assert build_Phat(N, 0, y2, 0) == expected
    assert build_Phat(N) == ts_truncate(ts_recip(1 - ts_shift(build_M(N), 1)), N)
    y1 = E.gen(1, 1)
    d = build_Phat(N, y1) - build_P(N, y1)
    assert d[2] == 0
    first = next(i for i in range(N + 1) if d[i] != 0)
    assert first > 2


def test_builders_commute_with_zero_substitution():
    k = 2
    y1, y2 = E.gen(k, 1), E.gen(k, 2)
    N = 14
    for build in (build_M, build_Mb, build_Mu, build_Mtilde):
        full = build(N, y1 + y2)
        assert to_rational(full) == build(N)
        assert substitute_zero(full, 0b10) == build(N, y1)
    assert to_rational(build_P(N, y1, y2, y1 + y2)) == build_P(N)
    assert to_rational(build_Phat(N, y1, y2, y1 + y2)) == build_Phat(N)


def test_builder_denominators_are_powers_of_two():
    k = 2
    y = E.gen(k, 1) + E.gen(k, 2)
    for build in (build_M, build_Mb, build_Mu, build_Mtilde):
        s = build(40, y)
        for n in range(41):
            for c in s[n].coeffs:
                d = c.denominator
                assert d & (d - 1) == 0


def test_extract_full_series():
    y1 = E.gen(1, 1)
    s = TS.from_coeffs([1, 2 + 3 * y1, y1])
    assert extract_full(s).coeffs == [0, 3, 1]


@st.composite
def series(draw, unit=False, marked=False):
    order = draw(st.integers(min_value=0, max_value=12))
    if marked:
        k = draw(st.integers(min_value=1, max_value=2))
        coeffs = [
            E(k, draw(st.lists(small_fractions, min_size=1 << k, max_size=1 << k)))
            for _ in range(order + 1)
        ]
        if unit == "one":
            coeffs[0] = E.const(k, 1)
        elif unit:
            coeffs[0] = E(k, [1] + list(coeffs[0].coeffs[1:]))
        return TS.from_coeffs(coeffs, order, k)
    coeffs = draw(st.lists(small_fractions, min_size=order + 1, max_size=order + 1))
    if unit:
        coeffs[0] = F(1)
    return TS.from_coeffs(coeffs, order)


@settings(max_examples=1000, deadline=None)
@given(series(unit=True), st.booleans())
def test_recip_roundtrip(s, scale):
    if scale:
        s = s * 3
    r = ts_recip(s)
    assert s * r == TS.const(1, s.order)


@settings(max_examples=1000, deadline=None)
@given(series(unit=True, marked=True))
def test_recip_roundtrip_marked(s):
    assert s * ts_recip(s) == TS.const(1, s.order, s.k)


@settings(max_examples=1000, deadline=None)
@given(series(unit=True))
def test_sqrt_roundtrip(s):
    r = ts_sqrt(s)
    assert r[0] == 1
    assert r * r == s


@settings(max_examples=1000, deadline=None)
@given(series(unit="one", marked=True))
def test_sqrt_roundtrip_marked(s):
    r = ts_sqrt(s)
    assert r * r == s


@settings(max_examples=300, deadline=None)
@given(series(), series())
def test_mul_is_cauchy_product(a, b):
    n = min(a.order, b.order)
    expected = [sum(a[i] * b[j - i] for i in range(j + 1)) for j in range(n + 1)]
    assert ts_mul(a, b).coeffs == expected
    assert ts_truncate(a, n) == ts_truncate(a, n)

from decimal import Decimal
from fractions import Fraction

import pytest

from phylogf import asym, gf


def test_first_order_table_cell():
    est = asym.asym_estimate("normal", 1, 49, order=1, table_e=True)
    mant, exp = asym.scientific(est.value)
    assert exp == 70
    assert abs(int(mant.replace(".", "")) - 2845078723) <= 1


@pytest.mark.parametrize("key", sorted(asym.CONSTANTS))
def test_constants_follow_from_closed_forms(key):
    klass, k = key
    A, B = asym.constants_from_gf(gf.closed_form(klass, k))
    assert A == asym.CONSTANTS[key].A
    assert B == asym.CONSTANTS[key].B


@pytest.mark.parametrize("key", sorted(asym.CONSTANTS))
def test_leading_constant_is_twice_c(key):
    c = asym.CONSTANTS[key]
    assert c.A == c.c * asym.Surd(Fraction(2))


def test_printed_treechild_k3_gives_other_B():
    _, B = asym.constants_from_gf(gf.CATALOG["treechild", 3])
    assert B != asym.CONSTANTS["treechild", 3].B


def test_surd_normalises():
    assert asym.Surd(Fraction(1), 2) == asym.Surd(Fraction(2))
    assert asym.Surd(Fraction(1), 3) == asym.Surd(Fraction(2), 1)


@pytest.mark.parametrize("n", [49, 225, 961])
def test_precision_is_self_consistent(n):
    lo = asym.asym_estimate("treechild", 2, n, digits=30).value
    hi = asym.asym_estimate("treechild", 2, n, digits=40).value
    assert abs(lo - hi) / hi < Decimal(10) ** -29


def test_even_n():
    est = asym.asym_estimate("normal", 2, 50)
    assert est.even_n and est.value == 0
    with pytest.raises(asym.EvenN):
        asym.second_order_probe("normal", 1, 50)


def test_second_order_lowers_estimate():
    # B < 0 in every class, so the correction pulls down (below zero for small n when k = 3)
    for key in asym.CONSTANTS:
        first = asym.asym_estimate(*key, 121, order=1).value
        second = asym.asym_estimate(*key, 121, order=2).value
        assert second < first


def test_estimates_approach_counts():
    for key in asym.CONSTANTS:
        exact = Decimal(gf.count(*key, 961))
        first = asym.asym_estimate(*key, 961, order=1).value
        second = asym.asym_estimate(*key, 961, order=2).value
        assert abs(second - exact) < abs(first - exact)


def test_leaf_estimate_ratio():
    exact = Decimal(gf.leaf_labeled_count("normal", 1, 400))
    est = asym.leaf_asym_estimate("normal", 1, 400)
    assert abs(exact / est - 1) < Decimal("0.25")


def test_render():
    assert asym.render(Decimal("2.8450787234e70")) == "2.845078723E+0070"
    assert asym.render(10**100) == "1.000000000E+0100"
    assert asym.render(Decimal("-1.0446e75")) == "-1.044600000E+0075"
    assert asym.render(0) == "0.000000000E+0000"


def test_pi():
    ctx = asym._context(40)
    assert str(asym._pi(ctx))[:42] == "3.1415926535897932384626433832795028841971"


def test_table_rows():
    rows = asym.appendix_table("normal", 1, [49, 81, 50])
    assert [r.n for r in rows] == [49, 81, 50]
    assert rows[0].exact == gf.count("normal", 1, 49)
    assert rows[2].exact == 0 and rows[2].first == 0


def test_bad_order():
    with pytest.raises(ValueError):
        asym.asym_estimate("normal", 1, 49, order=3)

from fractions import Fraction

import pytest

from drinfeld_cm.errors import BadInputError
from drinfeld_cm.ffield import field
from drinfeld_cm import polyring as pr
from drinfeld_cm.brownval import (
    log_abs_j,
    moduli_of,
    product_degree,
    ramified_nonunit_certificate,
    weil_height,
)
from drinfeld_cm.cmpoints import enumerate_points
from drinfeld_cm.quadfield import order_from, order_from_discriminant, validate_field

F2 = field(2)
F3 = field(3)


def P(fld, text):
    return pr.parse_poly(fld, text)


def hayes_order():
    return order_from_discriminant(F3, P(F3, "T-T^2"))


def test_log_abs_j_examples():
    pts = enumerate_points(hayes_order())
    by_a = {(str(p.a), str(p.b)): p for p in pts}
    assert log_abs_j(by_a[("1", "0")]) == 9  # q^(n+1), n = 1
    assert log_abs_j(by_a[("T", "0")]) == -1  # q + (q+1) log dist = 3 - 4
    # insep q=2 f=1: z = sqrt(T): n = 1: (q+1)q/2 = 3
    o = order_from(validate_field(F2, "even_insep"), pr.one(F2))
    assert log_abs_j(enumerate_points(o)[0]) == 3


def test_moduli_hayes():
    mods = moduli_of(hayes_order())
    assert [m.log_j for m in mods] == [9, -1]
    assert [len(m.points) for m in mods] == [1, 4]


def test_weil_height_hayes():
    h = weil_height(hayes_order())
    assert h == Fraction(9, 2)
    # easy lower bound |D|^(1/2)/h = 3/2
    assert h >= Fraction(3, 2)


def test_ramified_heights_floor():
    q = 3
    for d in ["T", "T^3+2*T+1", "2*T^3+T"]:
        o = order_from_discriminant(F3, P(F3, d))
        mods = moduli_of(o)
        for m in mods:
            assert m.log_j >= Fraction(q * (q + 1), 2)
        assert weil_height(o) >= Fraction(q * (q + 1), 2)


def test_certificate():
    cert = ramified_nonunit_certificate(order_from_discriminant(F3, P(F3, "T")))
    assert cert["nonunit"] and int(cert["norm_degree"]) >= 6
    o2 = order_from(validate_field(F2, "even_insep"), P(F2, "T"))
    cert2 = ramified_nonunit_certificate(o2)
    assert cert2["nonunit"]
    assert all(Fraction(v) >= 3 for v in cert2["conjugate_valuations"])
    with pytest.raises(BadInputError):
        ramified_nonunit_certificate(hayes_order())  # inert


def test_product_degree():
    mods = moduli_of(hayes_order())
    assert product_degree(mods[0], mods[1]) == 8  # the Hayes pair: q^2 - 1
    assert product_degree(mods[0], mods[0]) == 18


def test_insep_class_and_heights():
    o = order_from(validate_field(F2, "even_insep"), P(F2, "T"))
    mods = moduli_of(o)
    assert len(mods) == 2  # h = |f| = 2
    assert sorted(m.log_j for m in mods) == [3, 6]
    assert weil_height(o) == Fraction(9, 2)

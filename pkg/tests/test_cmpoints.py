from fractions import Fraction

import pytest

from drinfeld_cm.errors import BadInputError
from drinfeld_cm.ffield import field
from drinfeld_cm import polyring as pr
from drinfeld_cm.cmpoints import (
    c_epsilon_set,
    elliptic_neighbor,
    enumerate_points,
    fundamental_domain_check,
    majb_check,
)
from drinfeld_cm.quadfield import order_from, order_from_discriminant, validate_field

F2 = field(2)
F3 = field(3)


def P(fld, text):
    return pr.parse_poly(fld, text)


def hayes_order():
    return order_from_discriminant(F3, P(F3, "T-T^2"))


def test_enumerate_hayes_points():
    pts = enumerate_points(hayes_order())
    pairs = {(str(p.a), str(p.b)) for p in pts}
    assert pairs == {("1", "0"), ("T", "0"), ("T+2", "0"), ("T+1", "1"), ("T+1", "2")}
    for p in pts:
        # defining identity replay
        assert p.b * p.b - p.a.scale(4 % 3) * p.c == p.order.D_O
        assert (p.b.is_zero() or p.b.deg < p.a.deg) and p.a.deg <= p.c.deg
    seed = [p for p in pts if p.a.is_one()]
    assert len(seed) == 1 and seed[0].n == 1 and seed[0].eps == 0


def test_enumerate_ramified_seed():
    o = order_from_discriminant(F3, P(F3, "T"))
    pts = enumerate_points(o)
    assert any(p.a.is_one() and p.b.is_zero() for p in pts)
    for p in pts:
        assert p.eps == Fraction(1, 2)  # ramified: half-integer size
        assert p.n >= 1


def test_elliptic_neighbors_hayes():
    pts = enumerate_points(hayes_order())
    with_e = [p for p in pts if p.dist_e_log is not None]
    assert len(with_e) == 4  # the four n = 0 points
    for p in with_e:
        assert p.n == 0
        assert p.dist_e == Fraction(1, 3)  # exactly the floor 1/sqrt|D|
        f9 = field(3, 1, 2)
        # e^2 = sgn(D)/4 = 2 (4 = 1 mod 3)
        from drinfeld_cm.ffield import embedding_table

        assert f9.mul(p.e_code, p.e_code) == embedding_table(F3, f9)[2]
    ram = [p for p in enumerate_points(order_from_discriminant(F3, P(F3, "T")))]
    assert all(p.dist_e_log is None for p in ram)  # ramified flavor: never


def test_elliptic_floor_sweep():
    # Lemma floor: dist >= 1/sqrt|D| for all odd-flavor points, |D| <= 3^6
    for dd in (2, 4):
        for dcode in range(3**dd):
            coeffs = []
            t = dcode
            for _ in range(dd):
                t, c = divmod(t, 3)
                coeffs.append(c)
            D = pr.Poly(F3, coeffs + [2])
            try:
                o = order_from_discriminant(F3, D)
            except BadInputError:
                continue
            for p in enumerate_points(o):
                if p.dist_e_log is not None:
                    assert -p.dist_e_log <= D.deg // 2


def test_insep_points():
    k = validate_field(F2, "even_insep")
    o = order_from(k, P(F2, "T"))
    pts = enumerate_points(o)
    assert len(pts) == 2
    by_a = {str(p.a): p for p in pts}
    assert by_a["1"].n == 2 and by_a["1"].eps == Fraction(1, 2)
    assert by_a["T+1"].n == 1
    assert all(p.dist_e_log is None for p in pts)


def test_even_sep_inert_points():
    k = validate_field(F2, "even_sep", B=P(F2, "T+1"), C=P(F2, "T"))
    o = order_from(k, pr.one(F2))
    pts = enumerate_points(o)
    assert len(pts) == 4
    seed = [p for p in pts if p.a.is_one()][0]
    assert seed.n == 1 and seed.eps == 0
    near = [p for p in pts if p.dist_e_log is not None]
    assert len(near) == 3
    for p in near:
        assert p.dist_e == Fraction(1, 2)  # floor 1/|fG| attained
        f4 = field(2, 2)
        assert f4.add(f4.mul(p.e_code, p.e_code), p.e_code) == 1  # e^2 + e = sgn(B)


def test_c_epsilon():
    o = hayes_order()
    all_near = c_epsilon_set(o, Fraction(1))
    assert len(all_near) == 4
    none_near = c_epsilon_set(o, Fraction(1, 3))  # strict: distance exactly 1/3 excluded
    assert none_near == []
    with pytest.raises(BadInputError):
        c_epsilon_set(o, Fraction(2))


def test_majb():
    o = hayes_order()
    pts = [p for p in enumerate_points(o) if p.dist_e_log is not None]
    for p in pts:
        res = majb_check(p, Fraction(1))
        assert all(res.values()), res
    k = validate_field(F2, "even_sep", B=P(F2, "T+1"), C=P(F2, "T"))
    o2 = order_from(k, pr.one(F2))
    for p in enumerate_points(o2):
        if p.dist_e_log is not None:
            res = majb_check(p, Fraction(1))
            assert all(res.values()), res


def test_fundamental_domain():
    for o in [
        hayes_order(),
        order_from_discriminant(F3, P(F3, "T")),
        order_from(validate_field(F2, "even_insep"), P(F2, "T")),
        order_from(validate_field(F2, "even_sep", B=P(F2, "T+1"), C=P(F2, "T")), pr.one(F2)),
    ]:
        for p in enumerate_points(o):
            assert fundamental_domain_check(p)


def test_tsv_row():
    p = enumerate_points(hayes_order())[0]
    row = p.tsv_row()
    assert row.split("\t")[0] == "1"

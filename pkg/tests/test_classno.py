from fractions import Fraction

import pytest

from drinfeld_cm.errors import BadInputError
from drinfeld_cm.ffield import field
from drinfeld_cm import polyring as pr
from drinfeld_cm.classno import (
    check_class_bound,
    class_number,
    class_number_by_conductor,
    class_number_by_orbit,
    l_route,
    maximal_class_number,
    unit_index,
)
from drinfeld_cm.quadfield import order_from, order_from_discriminant, validate_field

F2 = field(2)
F3 = field(3)


def P(fld, text):
    return pr.parse_poly(fld, text)


def test_l_route_hayes_field():
    k = validate_field(F3, "odd", D=P(F3, "T-T^2"))
    data = l_route(k)
    assert data.g_K == 0
    assert data.lam == [1, 1]  # chi(T) = 0, chi(T+1) = 1, chi(T+2) = 0
    assert data.h_K == 1 and data.h_OK == 2
    assert sum(data.lam) == 2 * data.h_K
    assert all(r == 0 for r in data.functional_equation_residual())


def test_l_route_guards():
    with pytest.raises(BadInputError):
        l_route(validate_field(F3, "odd", D=P(F3, "T")))  # ramified
    with pytest.raises(BadInputError):
        l_route(validate_field(F3, "odd", D=P(F3, "2*T^2")))  # constant extension
    with pytest.raises(BadInputError):
        l_route(validate_field(F2, "even_insep"))


def test_l_route_even_sep():
    k = validate_field(F2, "even_sep", B=P(F2, "T+1"), C=P(F2, "T"))
    data = l_route(k)
    assert data.g_K == 0
    assert data.h_OK == 2
    assert class_number_by_orbit(order_from(k, pr.one(F2))) == 2


def test_triple_agreement_hayes():
    o = order_from_discriminant(F3, P(F3, "T-T^2"))
    assert class_number_by_orbit(o) == 2
    assert class_number_by_conductor(o) == 2
    assert class_number(o) == 2
    assert l_route(o.field).h_OK == 2


def test_insep_conductor_route():
    k = validate_field(F2, "even_insep")
    o = order_from(k, P(F2, "T"))
    assert class_number_by_conductor(o) == 2  # h = |f|, all chi = 0
    assert class_number(o) == 2
    assert maximal_class_number(k) == 1
    assert class_number_by_orbit(order_from(k, pr.one(F2))) == 1  # cross-check h(O_F) = 1


def test_constant_extension_unit_index():
    # K = F_9(T) via D = 2T^2: h = |f| prod(1 - chi/|P|)/(q+1) = 3*(4/3)/4 = 1
    o = order_from_discriminant(F3, P(F3, "2*T^2"))
    assert unit_index(o) == 4
    assert maximal_class_number(o.field) == 1
    assert class_number(o) == 1


def test_conductor_route_nonmaximal_odd():
    # D = T^3 has D_K = T, f = T: ramified field, orbit route on the maximal order
    o = order_from_discriminant(F3, P(F3, "T^3"))
    assert o.f == P(F3, "T")
    h = class_number(o)
    assert h == class_number_by_orbit(o)


def test_class_bound():
    o = order_from_discriminant(F3, P(F3, "T-T^2"))
    rep = check_class_bound(o)
    assert rep["holds"] and rep["h"] == 2
    assert Fraction(rep["bound"]) == Fraction(37, 8) * 3 * 4
    with pytest.raises(BadInputError):
        check_class_bound(order_from_discriminant(F3, P(F3, "T")))  # ramified


def test_class_bound_sweep_small():
    for dd in (2, 4):
        for code in range(3**dd):
            coeffs = []
            t = code
            for _ in range(dd):
                t, c = divmod(t, 3)
                coeffs.append(c)
            D = pr.Poly(F3, coeffs + [2])
            try:
                o = order_from_discriminant(F3, D)
            except BadInputError:
                continue
            rep = check_class_bound(o)
            assert rep["holds"]

import random
from fractions import Fraction

import pytest

from drinfeld_cm.errors import BadInputError
from drinfeld_cm.ffield import field, quadratic_extension
from drinfeld_cm.laurent import LaurentSeries
from drinfeld_cm import polyring as pr
from drinfeld_cm.quadfield import (
    Order,
    QuadElement,
    QuadField,
    QuadSeries,
    QuadSeriesContext,
    RatFunc,
    embed,
    imag_part_log,
    lattice_dist_log,
    order_from,
    order_from_discriminant,
    validate_field,
    xi_series,
)

F2 = field(2)
F3 = field(3)


def P(fld, text):
    return pr.parse_poly(fld, text)


def rf(fld, num, den="1"):
    return RatFunc(P(fld, num), P(fld, den))


def rand_ratfunc(fld, rng):
    num = pr.Poly(fld, [rng.randrange(fld.order) for _ in range(rng.randint(0, 4))])
    den = pr.zero(fld)
    while den.is_zero():
        den = pr.Poly(fld, [rng.randrange(fld.order) for _ in range(rng.randint(1, 3))])
    return RatFunc(num, den)


# -- validation -----------------------------------------------------------------


def test_validate_odd_examples():
    assert validate_field(F3, "odd", D=P(F3, "T")).infinite_type == "ramified"
    k = validate_field(F3, "odd", D=P(F3, "T-T^2"))
    assert k.infinite_type == "inert"
    with pytest.raises(BadInputError):
        validate_field(F3, "odd", D=P(F3, "T^2"))
    with pytest.raises(BadInputError):
        validate_field(F3, "odd", D=P(F3, "T^2+1"))  # sgn 1 square, deg even: not imaginary
    with pytest.raises(BadInputError):
        validate_field(F2, "odd", D=P(F2, "T"))


def test_validate_odd_constant_extension():
    k = validate_field(F3, "odd", D=P(F3, "2*T^2"))
    assert k.is_constant_extension and k.infinite_type == "inert"
    assert k.D_K == P(F3, "2")


def test_validate_even_sep():
    k = validate_field(F2, "even_sep", B=P(F2, "T+1"), C=P(F2, "T"))
    assert k.infinite_type == "inert"
    assert k.G == P(F2, "T") and k.radG == P(F2, "T")
    assert k.G * k.G == k.C * k.radG
    assert k.D_K == P(F2, "T^2")
    r = validate_field(F2, "even_sep", B=P(F2, "T"), C=P(F2, "1"))
    assert r.infinite_type == "ramified"
    with pytest.raises(BadInputError):
        validate_field(F2, "even_sep", B=P(F2, "T^2"), C=P(F2, "1"))  # deg B - deg C even
    with pytest.raises(BadInputError):
        validate_field(F2, "even_sep", B=P(F2, "T"), C=P(F2, "T"))  # gcd != 1
    with pytest.raises(BadInputError):
        validate_field(F2, "even_sep", B=P(F2, "T^2+1"), C=P(F2, "T^2"))  # even exponent in C


def test_validate_even_insep():
    k = validate_field(F2, "even_insep")
    assert k.infinite_type == "ramified"
    assert k.v_xi() == Fraction(-1, 2)


# -- orders -----------------------------------------------------------------------


def test_order_from_examples():
    k = validate_field(F2, "even_sep", B=P(F2, "T+1"), C=P(F2, "T"))
    o = order_from(k, pr.one(F2))
    assert o.D_O == k.D_K  # maximal order: D_O = G^2
    k3 = validate_field(F3, "odd", D=P(F3, "T"))
    o3 = order_from(k3, pr.one(F3))
    assert o3.D_O == P(F3, "T")
    ki = validate_field(F2, "even_insep")
    oi = order_from(ki, P(F2, "T"))
    assert oi.D_O is None and oi.disc_deg() == 3  # |f^2 T| proxy


def test_order_from_discriminant():
    o = order_from_discriminant(F3, P(F3, "2*T^2"))
    assert o.f == P(F3, "T") and o.D_O == P(F3, "2*T^2")
    with pytest.raises(BadInputError):
        order_from_discriminant(F3, P(F3, "2"))  # constant: j = 0 order
    with pytest.raises(BadInputError):
        order_from(validate_field(F3, "odd", D=P(F3, "2*T^2")), pr.one(F3))


def test_order_nonmonic_conductor():
    k = validate_field(F3, "odd", D=P(F3, "T"))
    with pytest.raises(BadInputError):
        order_from(k, P(F3, "2*T"))


def test_even_disc_monic():
    k = validate_field(F2, "even_sep", B=P(F2, "T+1"), C=P(F2, "T"))
    for f in ["1", "T", "T+1", "T^2+T+1"]:
        o = order_from(k, P(F2, f))
        assert o.D_O.is_monic()
        assert o.D_O == P(F2, f) ** 2 * k.D_K


# -- exact elements -----------------------------------------------------------------


def test_conj_examples():
    k = validate_field(F3, "odd", D=P(F3, "T-T^2"))
    rng = random.Random(17)
    for _ in range(20):
        z = QuadElement(k, rand_ratfunc(F3, rng), rand_ratfunc(F3, rng))
        assert z.conj().conj() == z
        assert z.conj().x == z.x and z.conj().y == -z.y
    ke = validate_field(F2, "even_sep", B=P(F2, "T+1"), C=P(F2, "T"))
    xi = QuadElement(ke, rf(F2, "0"), rf(F2, "1"))
    assert xi.conj() == QuadElement(ke, rf(F2, "1"), rf(F2, "1"))  # xi + 1
    prod = xi * xi.conj()
    assert prod.y.is_zero() and prod.x == RatFunc(ke.B, ke.C)  # xi*conj(xi) = B/C
    for _ in range(20):
        z = QuadElement(ke, rand_ratfunc(F2, rng), rand_ratfunc(F2, rng))
        assert z.conj().conj() == z


def test_norm_is_z_times_conj():
    rng = random.Random(23)
    flavors = [
        validate_field(F3, "odd", D=P(F3, "T^3+2*T+1")),
        validate_field(F2, "even_sep", B=P(F2, "T+1"), C=P(F2, "T")),
        validate_field(F2, "even_insep"),
    ]
    for k in flavors:
        fld = k.base
        for _ in range(100):
            z = QuadElement(k, rand_ratfunc(fld, rng), rand_ratfunc(fld, rng))
            prod = z * z.conj() if k.flavor != "even_insep" else z * z
            assert prod.y.is_zero()
            assert prod.x == z.norm()


def test_defining_relation():
    for k in [
        validate_field(F3, "odd", D=P(F3, "T")),
        validate_field(F2, "even_sep", B=P(F2, "T+1"), C=P(F2, "T")),
        validate_field(F2, "even_insep"),
    ]:
        xi = QuadElement(k, RatFunc.of(pr.zero(k.base)), RatFunc.of(pr.one(k.base)))
        sq = xi * xi
        rel = k.xi_relation()
        if k.flavor == "even_sep":
            assert sq.x == rel and sq.y == RatFunc.of(pr.one(k.base))  # xi^2 = xi + B/C
        else:
            assert sq.x == rel and sq.y.is_zero()


# -- embeddings -----------------------------------------------------------------------


def test_embed_odd_inert_flat():
    k = validate_field(F3, "odd", D=P(F3, "T-T^2"))
    z = QuadElement(k, RatFunc.of(pr.zero(F3)), rf(F3, "1"))  # z = xi = sqrt(T-T^2)
    flat = embed(z, 25)
    assert flat.valuation() == -1  # |z| = 3
    f9 = quadratic_extension(F3)
    e = flat.sgn_code()
    # e^2 = sgn(D) = -1 = 2 embedded in F_9
    from drinfeld_cm.ffield import embedding_table

    assert f9.mul(e, e) == embedding_table(F3, f9)[2]
    # xi^2 = D to precision
    D_s = LaurentSeries.from_poly(P(F3, "T-T^2"), f9)
    assert ((flat * flat) - D_s).is_zero_known()


def test_embed_insep():
    k = validate_field(F2, "even_insep")
    z = QuadElement(k, RatFunc.of(pr.zero(F2)), rf(F2, "1"))  # sqrt(T)
    e = embed(z, 20)
    assert e.valuation() == Fraction(-1, 2)
    assert z.size_log() == Fraction(1, 2)  # |z| = q^(1/2)


def test_embed_matches_norm():
    rng = random.Random(29)
    fields_ = [
        validate_field(F3, "odd", D=P(F3, "T")),
        validate_field(F3, "odd", D=P(F3, "T-T^2")),
        validate_field(F2, "even_sep", B=P(F2, "T"), C=P(F2, "1")),
        validate_field(F2, "even_sep", B=P(F2, "T+1"), C=P(F2, "T")),
        validate_field(F2, "even_insep"),
    ]
    for k in fields_:
        fld = k.base
        done = 0
        while done < 25:
            z = QuadElement(k, rand_ratfunc(fld, rng), rand_ratfunc(fld, rng))
            if z.is_zero():
                continue
            v_exact = z.v_infinity()
            ze = embed(z, int(v_exact) + 15)
            assert ze.valuation() == v_exact  # |z|^2 = |N(z)|
            done += 1


def test_embed_even_sep_inert_relation():
    k = validate_field(F2, "even_sep", B=P(F2, "T+1"), C=P(F2, "T"))
    f4 = quadratic_extension(F2)
    xi = xi_series(k, f4, 30)
    rel = RatFunc(k.B, k.C).to_series(f4, 30)
    assert ((xi * xi + xi) - rel).is_zero_known()
    e = xi.coeff_code(0)
    # e^2 + e = sgn(B) = 1 and e not in F_2
    assert f4.add(f4.mul(e, e), e) == 1
    assert e not in (0, 1)


def test_quad_series_arithmetic():
    k = validate_field(F2, "even_insep")
    ctx = QuadSeriesContext(k, F2, 30)
    xs = LaurentSeries.from_poly(P(F2, "T+1"), F2).truncate(30)
    ys = LaurentSeries.one(F2, 30)
    z = QuadSeries(ctx, xs, ys)  # (T+1) + sqrt(T)
    zi = z.inverse()
    prod = z * zi
    assert prod.y.is_zero_known()
    one_ = prod.x - LaurentSeries.one(F2, None)
    assert one_.is_zero_known()
    # Frobenius: z^2 = norm when q = 2 (inseparable collapse)
    fr = z.frobenius_q()
    assert fr.y.is_zero_known()
    assert (fr.x - z.norm().truncate(fr.x.prec)).is_zero_known()


def test_quad_series_frobenius_odd():
    k = validate_field(F3, "odd", D=P(F3, "T"))
    ctx = QuadSeriesContext(k, F3, 25)
    xs = LaurentSeries.from_poly(P(F3, "T^2+1"), F3).truncate(25)
    ys = LaurentSeries.one(F3, 25)
    z = QuadSeries(ctx, xs, ys)
    fr = z.frobenius_q()
    cube = z * z * z
    assert (fr.x - cube.x.truncate(fr.x.prec)).is_zero_known()
    assert (fr.y - cube.y.truncate(fr.y.prec)).is_zero_known()


def test_imag_and_lattice_size():
    # z = sqrt(T-T^2): |z| = |z|_i = |z|_A = 3
    k = validate_field(F3, "odd", D=P(F3, "T-T^2"))
    z = QuadElement(k, RatFunc.of(pr.zero(F3)), rf(F3, "1"))
    flat = embed(z, 25)
    assert imag_part_log(flat) == 1
    assert lattice_dist_log(flat, 2) == 1
    # ramified: z = sqrt(T)
    k2 = validate_field(F3, "odd", D=P(F3, "T"))
    z2 = QuadElement(k2, RatFunc.of(pr.zero(F3)), rf(F3, "1"))
    e2 = embed(z2, 25)
    assert imag_part_log(e2) == Fraction(1, 2)
    assert lattice_dist_log(e2, 2) == Fraction(1, 2)


def test_field_jsonable_roundtrip():
    from drinfeld_cm.quadfield import field_from_jsonable

    for k in [
        validate_field(F3, "odd", D=P(F3, "T-T^2")),
        validate_field(F2, "even_sep", B=P(F2, "T+1"), C=P(F2, "T")),
        validate_field(F2, "even_insep"),
    ]:
        assert field_from_jsonable(k.base, k.to_jsonable()) == k

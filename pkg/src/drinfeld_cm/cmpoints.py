"""Enumeration of the reduced CM-point sets and per-point geometric data.

Odd flavor: S_D = {(-b + sqrt(D))/(2a)} with b^2 - 4ac = D, |b| < |a| <= |c|,
gcd(a, b, c) = 1.  Even separable: S_f(xi) with ac = b^2 + b f G + f^2 rad(G) B
and gcd(a, b, f) = 1.  Even inseparable: S_f(sqrt(T)) with ac = b^2 + f^2 T.

For every point, |z|^2 = |c|/|a| (the norm is c/a up to a unit), so
n = ceil((deg c - deg a)/2) and the fractional defect eps is 0 (inert) or 1/2
(ramified).  Points on the unit sphere of an inert field acquire an elliptic
neighbor e in F_{q^2}\\F_q together with the exact distance |z - e|, a power
of q read from a flattened series.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction

from .errors import BadInputError, InvariantError, PrecisionError
from .ffield import FFElem, embedding_table, quadratic_extension
from . import polyring as pr
from .polyring import Poly
from .quadfield import Order, QuadElement, RatFunc, embed, series_component


@dataclass(frozen=True)
class CMPoint:
    order: Order
    a: Poly
    b: Poly
    c: Poly
    z: QuadElement
    n: int
    eps: Fraction
    e_code: int | None = None  # elliptic neighbor in F_{q^2}, when |z| = 1 (inert)
    dist_e_log: int | None = None  # log_q |z - e| (negative)

    @property
    def dist_e(self) -> Fraction | None:
        if self.dist_e_log is None:
            return None
        return Fraction(1, self.order.field.q ** (-self.dist_e_log))

    def size_log(self) -> Fraction:
        """log_q |z| = (deg c - deg a)/2."""
        return Fraction(self.c.deg - self.a.deg, 2)

    def sort_key(self):
        return (self.a.deg, pr.poly_code(self.a), pr.poly_code(self.b))

    def tsv_row(self) -> str:
        e = "" if self.e_code is None else str(self.e_code)
        d = "" if self.dist_e_log is None else f"q^{self.dist_e_log}"
        return "\t".join([str(self.a), str(self.b), str(self.c), str(self.n), str(self.eps), e, d])


def _rhs(order: Order, b: Poly) -> Poly:
    """The product a*c as a polynomial identity in b, per flavor."""
    k = order.field
    f = order.f
    if k.flavor == "odd":
        return b * b - order.D_O
    if k.flavor == "even_sep":
        fG = f * k.G
        return b * b + b * fG + f * f * k.radG * k.B
    return b * b + f * f * pr.T(k.base)


def _point_z(order: Order, a: Poly, b: Poly) -> QuadElement:
    k = order.field
    base = k.base
    if k.flavor == "odd":
        # sqrt(D_O) = (f/g) * xi when the field is presented by D = sgn * g^2 * D0
        _, g, _ = pr.squarefree_split(k.D)
        twoa = a.scale(2 % base.p)
        return QuadElement(k, RatFunc(-b, twoa), RatFunc(order.f, twoa * g))
    if k.flavor == "even_sep":
        return QuadElement(k, RatFunc(b, a), RatFunc(order.f * k.G, a))
    return QuadElement(k, RatFunc(b, a), RatFunc(order.f, a))


def _deg_a_bound(order: Order) -> int:
    k = order.field
    if k.flavor == "odd":
        return order.D_O.deg // 2
    if k.flavor == "even_sep":
        return (2 * (order.f.deg + k.G.deg) + max(0, k.B.deg - k.C.deg)) // 2
    return order.f.deg


def enumerate_points(order: Order, *, geometry: bool = True, prec: int | None = None) -> list:
    """The complete reduced CM-point set of an order, in canonical order.

    With geometry=True, points with |z| = 1 in an inert field carry their
    elliptic neighbor and the exact distance |z - e|.
    """
    k = order.field
    base = k.base
    four_inv = base.inv(4 % base.p) if base.p != 2 else None
    points = []
    for da in range(_deg_a_bound(order) + 1):
        for a in pr.monic_of_degree(base, da):
            for b in pr.all_of_degree_less(base, da):
                rhs = _rhs(order, b)
                if k.flavor == "odd":
                    rhs = rhs.scale(four_inv)  # b^2 - 4ac = D => ac = (b^2 - D)/4
                if rhs.is_zero():
                    continue
                q_, r_ = divmod(rhs, a)
                if not r_.is_zero():
                    continue
                c = q_
                if c.is_zero() or c.deg < a.deg:
                    continue
                # Properness: End(A + Az) = O exactly.  Expanding the
                # endomorphism conditions for z = (b + beta*xi)/a gives
                # End = {x + y xi : beta | y * gcd(a, b, c)} with beta = fG
                # (resp. f, resp. the odd classical normalisation), so the
                # right condition is gcd(beta, a, b, c) = 1.  In odd
                # characteristic any content p divides beta^2 = |D| data and
                # this reduces to the classical gcd(a, b, c) = 1; in even
                # characteristic a content dividing B must be allowed (see
                # the worked counterexamples in the decisions ledger).
                if k.flavor == "odd":
                    if not pr.gcd_many([a, b, c]).is_one():
                        continue
                else:
                    beta = order.f * k.G if k.flavor == "even_sep" else order.f
                    if not pr.gcd_many([a, b, c, beta]).is_one():
                        continue
                diff = c.deg - a.deg
                n = (diff + 1) // 2
                eps = Fraction(n) - Fraction(diff, 2)
                z = _point_z(order, a, b)
                # replay the defining identity in exact arithmetic
                if z.v_infinity() != Fraction(a.deg - c.deg, 2):
                    raise InvariantError("point valuation does not match |c|/|a|")  # pragma: no cover
                points.append(CMPoint(order, a, b, c, z, n, eps))
    points.sort(key=CMPoint.sort_key)
    if len({(p.a, p.b) for p in points}) != len(points):
        raise InvariantError("(a, b) does not determine the point")  # pragma: no cover
    if geometry:
        points = [attach_elliptic_data(p, prec) for p in points]
    return points


def elliptic_floor_log(order: Order) -> int:
    """-log_q of the guaranteed elliptic-distance floor (inert flavors)."""
    k = order.field
    if k.flavor == "odd":
        return order.D_O.deg // 2  # |z - e| >= 1/sqrt|D|
    return order.f.deg + k.G.deg  # |z - e| >= 1/|fG|


def attach_elliptic_data(pt: CMPoint, prec: int | None = None) -> CMPoint:
    out = elliptic_neighbor(pt, prec)
    if out is None:
        return pt
    e_code, dist_log = out
    return replace(pt, e_code=e_code, dist_e_log=dist_log)


def elliptic_neighbor(pt: CMPoint, prec: int | None = None):
    """(e, log_q|z-e|) for an inert point with |z| = 1; None otherwise.

    Verifies e^2 = sgn(D)/4 (odd) or e^2 + e = sgn(B) (even separable) and
    the distance floors of the key lemmas; retries at doubled precision when
    the distance is not yet resolved.
    """
    order = pt.order
    k = order.field
    if k.infinite_type != "inert" or pt.n != 0:
        return None
    base = k.base
    desc2 = quadratic_extension(base)
    emb = embedding_table(base, desc2)
    floor = elliptic_floor_log(order)
    p = prec if prec is not None else floor + 8
    for _ in range(5):
        flat = embed(pt.z, p)
        if flat.valuation() != 0:
            raise InvariantError("inert point with n = 0 must have |z| = 1")
        e_code = flat.coeff_code(0)
        if e_code in set(emb):
            raise InvariantError("residue of z lies in F_q: |z|_i < 1 contradicts the fundamental domain")
        # residue identity
        if k.flavor == "odd":
            target = desc2.mul(emb[order.D_O.sgn], desc2.inv(emb[4 % base.p]))
            if desc2.mul(e_code, e_code) != target:
                raise InvariantError("e^2 != sgn(D)/4")
        else:
            if desc2.add(desc2.mul(e_code, e_code), e_code) != emb[k.B.sgn]:
                raise InvariantError("e^2 + e != sgn(B)")
        from .laurent import LaurentSeries

        diff = flat - LaurentSeries.constant(desc2, e_code, None)
        v = diff.valuation()
        if v is None:
            p *= 2
            continue
        if v < 1:
            raise InvariantError("|z - e| >= 1 at an n = 0 point")  # pragma: no cover
        if v > floor:
            raise InvariantError(f"|z - e| = q^-{v} below the floor q^-{floor}")
        return e_code, -v
    raise PrecisionError("could not resolve |z - e| (z = e would mean j = 0, an excluded order)")


def c_epsilon_set(order: Order, eps: Fraction) -> list:
    """Points of the order whose elliptic distance is < eps (0 < eps <= 1)."""
    if not (0 < eps <= 1):
        raise BadInputError("eps must satisfy 0 < eps <= 1")
    out = []
    for p in enumerate_points(order):
        if p.dist_e is not None and p.dist_e < eps:
            out.append(p)
    return out


def majb_check(pt: CMPoint, eps: Fraction, prec: int | None = None) -> dict:
    """Exact data for the near-elliptic approximation lemmas.

    For a point with |z - e| < eps: |a| = |D|^(1/2), |b| < eps|a|, and the
    flavor-specific closeness |sqrt(D)/(2e) - a| < eps|a| (odd) resp.
    |fG - a| < eps|a| and |b + beta*fG| < eps|a| with beta = xi - e (even).
    """
    order = pt.order
    k = order.field
    base = k.base
    if pt.dist_e_log is None or not pt.dist_e < eps:
        raise BadInputError("majb_check needs a point with |z - e| < eps")
    q = base.q
    out = {"a_matches_sqrtD": 2 * pt.a.deg == order.D_O.deg}
    eps_a_log = _log_q(eps, q) + pt.a.deg  # log_q(eps |a|)
    out["b_small"] = pt.b.is_zero() or pt.b.deg < eps_a_log
    floor = elliptic_floor_log(order)
    p = prec if prec is not None else floor + 12
    desc2 = quadratic_extension(base)
    from .laurent import LaurentSeries

    flat = embed(pt.z, p)
    a_s = LaurentSeries.from_poly(pt.a, desc2)
    b_s = LaurentSeries.from_poly(pt.b, desc2)
    if k.flavor == "odd":
        two = LaurentSeries.constant(desc2, 2 % base.p, None)
        sqrtD = two * a_s * flat + b_s
        e_inv = desc2.inv(desc2.mul(2 % base.p, pt.e_code))
        w = sqrtD.scale(e_inv) - a_s
        v = w.valuation()
        out["sqrtD_over_2e_close"] = v is None or -v < eps_a_log
    else:
        fG = order.f * k.G
        fg_s = LaurentSeries.from_poly(fG, desc2)
        w1 = fg_s - a_s
        v1 = w1.valuation()
        out["fG_close"] = v1 is None or -v1 < eps_a_log
        xi = (flat * a_s - b_s) * fg_s.truncate(p + fG.deg + 2).inverse()
        beta = xi - LaurentSeries.constant(desc2, pt.e_code, None)
        if not beta.is_zero_known() and series_component(beta, 1).comps.shape[1]:
            raise InvariantError("xi - e is not in k_infinity")
        w2 = b_s + beta * fg_s
        v2 = w2.valuation()
        out["b_beta_close"] = v2 is None or -v2 < eps_a_log
    return out


def _log_q(x: Fraction, q: int) -> int:
    """log_q of an exact power of q."""
    if x == 1:
        return 0
    n = 0
    if x > 1:
        while x > 1:
            x /= q
            n += 1
        if x != 1:
            raise BadInputError("not a power of q")
        return n
    while x < 1:
        x *= q
        n -= 1
    if x != 1:
        raise BadInputError("not a power of q")
    return n


def fundamental_domain_check(pt: CMPoint, prec: int | None = None) -> bool:
    """|z| = |z|_i = |z|_A >= 1, computed from the embedding."""
    from .quadfield import imag_part_log, lattice_dist_log

    size = pt.size_log()
    p = prec if prec is not None else int(2 * size) + 10
    ze = embed(pt.z, p)
    im = imag_part_log(ze)
    if im != size:
        return False
    deg_bound = int(size) + 1
    lat = lattice_dist_log(ze, deg_bound)
    return lat == size and size >= 0

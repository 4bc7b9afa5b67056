"""Order enumeration and shared per-order reports for the desk-scale sweeps.

One `order_report` bundles everything the verification suites need from an
order - points, exact valuations, the numeric valuation cross-check, the
distinct moduli, and the class-number routes - and is cached so that the
product search, the unit sweep and the lemma suites all reuse one pass.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import BadInputError, InvariantError
from .ffield import FieldDesc
from . import polyring as pr
from .polyring import Poly
from .quadfield import Order, QuadField, order_from, order_from_discriminant, validate_field

RAMIFIED_DEGB_WINDOW = 1  # ramified Hasse forms have unbounded deg B at fixed |D|


def _log_q(n: int, q: int) -> int:
    out = 0
    while q**out < n:
        out += 1
    return out if q**out == n else out - 1


def iter_odd_orders(base: FieldDesc, d_bound: int):
    """All odd-flavor orders with |D| <= d_bound, D canonical up to unit squares.

    sgn(D) is normalised to 1 or the least non-square; squares and
    non-imaginary D are skipped, as is the maximal order of F_{q^2}(T).
    """
    from .ffield import FFElem, is_square

    q = base.q
    maxdeg = _log_q(d_bound, q)
    nonsquare = next(c for c in range(2, base.order) if not is_square(FFElem(base, c)))
    for d in range(1, maxdeg + 1):
        sgns = [1, nonsquare] if d % 2 == 1 else [nonsquare]
        for monic in pr.monic_of_degree(base, d):
            for s in sgns:
                D = monic.scale(s)
                try:
                    yield order_from_discriminant(base, D)
                except BadInputError:
                    continue


def iter_even_sep_orders(base: FieldDesc, d_bound: int, degb_window: int = RAMIFIED_DEGB_WINDOW):
    """Even separable orders with |f^2 G^2| <= d_bound.

    Inert forms (deg B = deg C) are a finite family; ramified forms have
    unbounded deg B at fixed discriminant, so the sweep takes
    deg B <= deg C + degb_window (documented sweep window).
    """
    q = base.q
    half = _log_q(d_bound, q) // 2
    for dg in range(0, half + 1):
        for G in pr.monic_of_degree(base, dg):
            if dg > 0:
                _, items = pr.factor(G)
                C = pr.one(base)
                for P, e in items:
                    C = C * P ** (2 * e - 1)
            else:
                C = pr.one(base)
            if C.deg > 2 * dg:  # pragma: no cover - C = G^2/rad(G) has degree <= 2 dg
                continue
            degBs = [C.deg] + [C.deg + k for k in range(1, degb_window + 1, 2)]
            for degB in degBs:
                for Bm in pr.monic_of_degree(base, degB):
                    for s in range(1, base.order):
                        B = Bm.scale(s)
                        try:
                            k = validate_field(base, "even_sep", B=B, C=C)
                        except BadInputError:
                            continue
                        for df in range(0, half - dg + 1):
                            for f in pr.monic_of_degree(base, df):
                                try:
                                    yield order_from(k, f)
                                except BadInputError:
                                    continue


def iter_insep_orders(base: FieldDesc, d_bound: int):
    """Inseparable orders with the size proxy |f^2 T| <= d_bound."""
    q = base.q
    k = validate_field(base, "even_insep")
    maxdf = (_log_q(d_bound, q) - 1) // 2
    for df in range(0, maxdf + 1):
        for f in pr.monic_of_degree(base, df):
            yield order_from(k, f)


def iter_orders(base: FieldDesc, d_bound: int):
    if base.p == 2:
        yield from iter_even_sep_orders(base, d_bound)
        yield from iter_insep_orders(base, d_bound)
    else:
        yield from iter_odd_orders(base, d_bound)


@dataclass
class OrderReport:
    order: Order
    points: list
    moduli: list
    h_orbit: int
    h_conductor: int
    h_lroute: int | None
    height: Fraction
    brown_checked: bool

    @property
    def logs(self):
        return [m.log_j for m in self.moduli]


_report_cache: dict = {}


def order_report(order: Order, *, check_brown: bool = True) -> OrderReport:
    """Points, moduli, class numbers and height of one order (cached).

    With check_brown=True every point's numeric j-valuation is verified
    against the exact formula (the build's central cross-validation).
    """
    key = (order.field.key(), order.f.coeffs, check_brown)
    hit = _report_cache.get(key)
    if hit is not None:
        return hit
    from .brownval import log_abs_j, moduli_of, weil_height
    from .classno import class_number_by_conductor, l_route
    from .cmpoints import enumerate_points
    from .modforms import eval_j_valuation

    points = enumerate_points(order)
    if check_brown:
        for p in points:
            got = eval_j_valuation(p)
            if got != log_abs_j(p):
                raise InvariantError(f"Brown-vs-numeric mismatch at {order.label()} a={p.a} b={p.b}")
    h_formula = class_number_by_conductor(order)
    mods = moduli_of(order, expected=h_formula)
    h_orbit = len(mods)
    if h_orbit != h_formula:
        raise InvariantError(f"class-number disagreement for {order.label()}")  # pragma: no cover
    h_l = None
    field = order.field
    if (
        field.infinite_type == "inert"
        and field.flavor != "even_insep"
        and not field.is_constant_extension
        and order.is_maximal()
    ):
        h_l = l_route(field).h_OK
        if h_l != h_orbit:
            raise InvariantError(f"L-route disagreement for {order.label()}")  # pragma: no cover
    height = Fraction(sum(max(Fraction(0), m.log_j) for m in mods)) / h_orbit
    rep = OrderReport(order, points, mods, h_orbit, h_formula, h_l, height, check_brown)
    _report_cache[key] = rep
    return rep


@dataclass
class ModulusRecord:
    order: Order
    modulus: object  # SingularModulus
    key: tuple
    label: str


def sweep_moduli(base: FieldDesc, d_bound: int, *, check_brown: bool = False) -> list:
    """Every singular modulus of every order with |D| <= d_bound."""
    out = []
    for order in iter_orders(base, d_bound):
        rep = order_report(order, check_brown=check_brown)
        for idx, m in enumerate(rep.moduli):
            key = (order.disc_deg(), order.label(), idx)
            out.append(ModulusRecord(order, m, key, f"{order.label()}#{idx} (log|j|={m.log_j})"))
    return out


def clear_caches():
    _report_cache.clear()

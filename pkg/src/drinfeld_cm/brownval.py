"""Exact valuations of singular moduli, Weil heights, and unit certificates.

The absolute value of j at a reduced CM point is determined by the flavor and
the point's size data alone: q^((q+1)q^n/2) when infinity ramifies (n >= 1),
q^(q^(n+1)) at inert points above the unit sphere, and q^q |z-e|^(q+1) at
inert points on it.  Everything here is exact rational arithmetic; numerical
values (used to separate conjugates) come from the t-expansion evaluator and
agree with these formulas digit-for-digit.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import BadInputError, InvariantError, PrecisionError
from .cmpoints import CMPoint, enumerate_points
from .quadfield import Order

DEDUP_DIGITS = 24


def log_abs_j(pt: CMPoint) -> Fraction:
    """log_q |j(z)| from the exact valuation theorems, per flavor."""
    order = pt.order
    q = order.field.q
    if order.field.infinite_type == "ramified":
        if pt.n < 1:
            raise InvariantError("ramified point with n = 0 contradicts the valuation theorems")
        return Fraction(q + 1, 2) * q**pt.n
    if pt.n >= 1:
        return Fraction(q ** (pt.n + 1))
    if pt.dist_e_log is None:
        raise BadInputError("n = 0 inert point needs its elliptic distance resolved")
    return Fraction(q + (q + 1) * pt.dist_e_log)


@dataclass
class SingularModulus:
    """A distinct singular modulus: its exact valuation plus member points."""

    order: Order
    log_j: Fraction
    points: tuple
    numeric: object | None = None  # LaurentSeries (inert) or QuadSeries (ramified)

    def sort_key(self):
        return (-self.log_j, self.points[0].sort_key())


def _values_at(pts, prec: int):
    from .modforms import eval_j

    return [eval_j(pt, prec).value for pt in pts]


def _same_value(v1, v2, vlog: Fraction) -> bool | None:
    """True/False when certain; None when precision does not decide.

    Arithmetic is exact, so any nonzero known digit of the difference
    certifies distinctness; equality is accepted once every known digit
    vanishes with enough digits past the common valuation -vlog.
    """
    diff = v1 - v2
    if not diff.is_zero_known():
        return False
    prec = diff.prec_q() if hasattr(diff, "prec_q") else diff.prec
    if prec is None:
        return True
    if Fraction(prec) >= -vlog + 6:
        return True
    return None


def moduli_of(order: Order, *, value_prec: int | None = None, expected: int | None = None) -> list:
    """The distinct singular moduli of an order, deduplicated numerically.

    Points are first grouped by their exact valuation; within a group, two
    points are identified when their numeric j values agree on every known
    digit with enough digits past the common valuation.  A disagreeing digit
    is an exact certificate of distinctness.  `expected` (a class number from
    an independent route) triggers retries at doubled precision on mismatch.
    """
    pts = enumerate_points(order)
    if not pts:
        raise InvariantError("a valid order has a nonempty reduced point set")
    groups: dict = {}
    for p in pts:
        groups.setdefault(log_abs_j(p), []).append(p)
    digits = DEDUP_DIGITS
    for _ in range(4):
        out = []
        ok = True
        for lg, members in sorted(groups.items(), key=lambda kv: -kv[0]):
            prec = int(-lg) + digits  # `digits` exact digits past the common valuation
            if value_prec is not None:
                prec = max(prec, value_prec)
            if len(members) == 1:
                val = _values_at(members, prec)[0] if value_prec is not None else None
                out.append(SingularModulus(order, lg, tuple(members), val))
                continue
            vals = _values_at(members, prec)
            classes: list = []  # (rep_value, [points])
            for pt, val in zip(members, vals):
                placed = False
                for cls in classes:
                    same = _same_value(cls[0], val, lg)
                    if same is None:
                        ok = False
                        break
                    if same:
                        cls[1].append(pt)
                        placed = True
                        break
                if not ok:
                    break
                if not placed:
                    classes.append((val, [pt]))
            if not ok:
                break
            for val, cls_pts in classes:
                out.append(SingularModulus(order, lg, tuple(cls_pts), val))
        if ok and (expected is None or len(out) == expected):
            out.sort(key=SingularModulus.sort_key)
            return out
        digits *= 2
    if not ok:
        raise PrecisionError("could not separate conjugate moduli at the precision cap")
    raise InvariantError(
        f"distinct-moduli count {len(out)} disagrees with the independent class number {expected}"
    )


def weil_height(order: Order) -> Fraction:
    """h(j) = (1/m) sum over distinct moduli of max(0, log_q|j_i|).

    Finite places contribute nothing: singular moduli are integral over A.
    """
    mods = moduli_of(order)
    m = len(mods)
    return Fraction(sum(max(Fraction(0), s.log_j) for s in mods), 1) / m


def ramified_nonunit_certificate(order: Order) -> dict:
    """Every conjugate has |j| >= q^(q(q+1)/2) > 1: the norm has positive degree."""
    if order.field.infinite_type != "ramified":
        raise BadInputError("certificate applies to ramified orders only")
    q = order.field.q
    mods = moduli_of(order)
    logs = [s.log_j for s in mods]
    floor = Fraction(q * (q + 1), 2)
    if min(logs) < floor:
        raise InvariantError("ramified conjugate below the valuation floor")  # pragma: no cover
    return {
        "order": order.label(),
        "m": len(mods),
        "conjugate_valuations": [str(v) for v in logs],
        "min_log": str(min(logs)),
        "norm_degree": str(sum(logs)),
        "nonunit": True,
    }


def product_degree(m1: SingularModulus, m2: SingularModulus) -> Fraction:
    """log_q |j_1 j_2| by multiplicativity."""
    return m1.log_j + m2.log_j

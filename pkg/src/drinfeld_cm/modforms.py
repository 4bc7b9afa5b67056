"""Numerical j-values via t-expansions, with certified truncation everywhere.

The two weight forms are evaluated in their period-free normalisations
    gt(z) = 1 - (T^q - T) * sum_{a monic} t(az)^(q-1),
    dt(z) = - sum_{a monic} a^(q(q-1)) t(az)^(q-1),
and j = gt^(q+1)/dt, all powers of the Carlitz period cancelling since
(q-1)(q+1) = q^2 - 1.  The period itself (a (q-1)-st root) is never
constructed: with S_a = e_C(pi*a*z)/pi = sum_i pi^(q^i-1) (az)^(q^i) / D_i,
only pi^(q-1) appears, and t(az)^(q-1) = S_a / (pi^(q-1) * S_a^q).

Truncation indices are certified: the a-sum tail comes from the exact
valuation v(t(az)) = (q/(q-1) - eps) q^(n + deg a) (verified on every term,
which is the appendix valuation lemma run as an assertion), and the
Carlitz-sum tail from the exact term valuations i q^i - q (q^i-1)/(q-1).
Frobenius powers (az)^(q^i) are coefficientwise, so they cost no
convolutions and lose no precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import BadInputError, InvariantError, PrecisionError
from .ffield import FieldDesc, quadratic_extension
from .laurent import LaurentSeries, pi_power_qm1
from . import polyring as pr
from .polyring import Poly
from .quadfield import Order, QuadSeries, QuadSeriesContext, embed, lift_to_quad
from .cmpoints import CMPoint
from .brownval import log_abs_j

GUARD = 10


def _coeff_valuation(q: int, i: int) -> int:
    """v of pi^(q^i - 1)/D_i: i q^i - q (q^i - 1)/(q - 1)."""
    return i * q**i - q * (q**i - 1) // (q - 1)


class EvalContext:
    """Carlitz data over one coefficient field, kept at a fixed relative precision.

    Multiplication preserves relative precision and Frobenius multiplies it
    by q, so every coefficient pi^(q^i - 1)/D_i can be carried with `rel`
    digits past its own (rapidly growing) valuation at constant cost.
    """

    def __init__(self, base: FieldDesc, cdesc: FieldDesc, rel: int):
        self.base = base
        self.cdesc = cdesc
        self.q = base.q
        self.rel = rel
        self.pi = pi_power_qm1(cdesc, rel + 2)  # v = -q, so rel + q + 2 known digits
        self._coeffs = [LaurentSeries.one(cdesc, rel)]

    def coeff(self, i: int) -> LaurentSeries:
        """pi^(q^i - 1)/D_i by the Frobenius recursion c_i = c_(i-1)^q pi / [i]."""
        from .laurent import inverse_bracket_series

        q = self.q
        while len(self._coeffs) <= i:
            k = len(self._coeffs)
            vk = _coeff_valuation(q, k)
            c = self._coeffs[k - 1].frobenius_q() * self.pi
            c = c * inverse_bracket_series(self.cdesc, k, self.rel + 2)
            c = c.truncate(vk + self.rel)
            if c.valuation() != vk:
                raise InvariantError(f"Carlitz coefficient valuation mismatch at i={k}")
            self._coeffs.append(c)
        return self._coeffs[i]

    def poly_series(self, a: Poly) -> LaurentSeries:
        return LaurentSeries.from_poly(a, self.cdesc)


def _context_for(order: Order, prec: int, cdesc: FieldDesc | None = None) -> EvalContext:
    base = order.field.base
    if cdesc is None:
        cdesc = quadratic_extension(base) if order.field.infinite_type == "inert" else base
    return EvalContext(base, cdesc, prec)


def _scale_poly(el, a_series: LaurentSeries):
    if isinstance(el, LaurentSeries):
        return el * a_series
    return el.scale_series(a_series)


def _frob(el):
    return el.frobenius_q()


def _valuation(el) -> Fraction | None:
    v = el.valuation()
    return Fraction(v) if v is not None else None


def _truncate(el, prec: Fraction | int):
    return el.truncate(int(math.ceil(prec)))


@dataclass
class TermData:
    """t(az)^(q-1) for one monic a, plus the appendix-lemma checkpoints."""

    value: object
    s_value: object
    v_t: Fraction  # v(t(az)) as certified
    e_c_terms: int


def carlitz_S(ctx: EvalContext, z_el, pt: CMPoint, a: Poly, s_target: Fraction):
    """S_a = e_C(pi a z)/pi to absolute precision s_target, with its valuation
    asserted against the exact formula -(q/(q-1) - eps) q^(n + deg a) + q/(q-1).

    Returns (S_a, last index used).  The certified index set consists of the
    i with exact term valuation i q^i - q (q^i-1)/(q-1) + q^i v(az) below
    s_target; the valuations dip to the dominant index and then grow.
    """
    q = ctx.q
    theta = Fraction(q, q - 1) - pt.eps
    v_s = -theta * q ** (pt.n + a.deg) + Fraction(q, q - 1)
    az = _scale_poly(z_el, ctx.poly_series(a))
    v_az = _valuation(az)
    if v_az is None:
        raise PrecisionError("a*z indistinguishable from 0")
    incl = []
    i = 0
    prev_v = None
    while True:
        v_term = Fraction(_coeff_valuation(q, i)) + q**i * v_az
        if v_term < s_target:
            incl.append(i)
        elif prev_v is not None and v_term >= prev_v and v_term >= s_target and incl:
            break
        prev_v = v_term
        i += 1
        if i > 80:  # pragma: no cover
            raise InvariantError("Carlitz sum did not terminate")
    s_val = None
    u = az
    imax = incl[-1]
    for i in range(imax + 1):
        if i in incl:
            needed = s_target - _coeff_valuation(q, i)
            term = _scale_poly(_truncate(u, needed + 2), ctx.coeff(i))
            s_val = term if s_val is None else s_val + term
        if i < imax:
            # keep enough digits of u for every remaining included index
            fut = max((s_target - _coeff_valuation(q, j)) / Fraction(q ** (j - i)) for j in incl if j > i)
            u = _frob(_truncate(u, fut + 2))
    s_val = _truncate(s_val, s_target)
    v_s_got = _valuation(s_val)
    if v_s_got != v_s:
        raise InvariantError(
            f"valuation of e_C(pi a z)/pi is {v_s_got}, formula says {v_s} (a={a}, point a={pt.a}, b={pt.b})"
        )
    return s_val, imax


def t_pow_qm1(ctx: EvalContext, z_el, pt: CMPoint, a: Poly, target: Fraction) -> TermData | None:
    """t(az)^(q-1) to absolute precision `target`; None when entirely negligible."""
    q = ctx.q
    theta = Fraction(q, q - 1) - pt.eps
    v_t1 = theta * q ** (pt.n + a.deg)
    v_tq = (q - 1) * v_t1
    ell = Fraction(target) - v_tq
    if ell <= 0:
        return None
    v_s = -v_t1 + Fraction(q, q - 1)
    s_val, used = carlitz_S(ctx, z_el, pt, a, v_s + ell + 1)
    # t^(q-1) = S / (pi^(q-1) * S^q)
    den = _scale_poly(_frob(s_val), ctx.pi)
    t_qm1 = _truncate(s_val * den.inverse(), target)
    v_got = _valuation(t_qm1)
    if v_got != v_tq:
        raise InvariantError(f"v(t(az)^(q-1)) = {v_got}, formula says {v_tq}")
    return TermData(t_qm1, s_val, v_t1, used)


@dataclass
class JValue:
    point: CMPoint
    value: object  # LaurentSeries (inert) or QuadSeries (ramified)
    v: Fraction
    plan: dict


def _zero_like(ctx: EvalContext, mode_quad: QuadSeriesContext | None, prec):
    p = int(math.ceil(prec))
    if mode_quad is None:
        return LaurentSeries.zero(ctx.cdesc, p)
    return QuadSeries.zero(mode_quad, p)


def eval_gt_dt(ctx: EvalContext, pt: CMPoint, z_el, target_g: Fraction, target_d: Fraction):
    """(gt, dt) to the requested absolute precisions, with certified a-tails."""
    q = ctx.q
    theta = Fraction(q, q - 1) - pt.eps
    qctx = None if isinstance(z_el, LaurentSeries) else z_el.ctx
    gsum = _zero_like(ctx, qctx, Fraction(target_g) + q)
    dsum = _zero_like(ctx, qctx, target_d)
    d = 0
    max_deg_a = 0
    e_c_terms = 0
    prev = None
    while True:
        v_tq = (q - 1) * theta * q ** (pt.n + d)
        v_g_term = v_tq - q
        v_d_term = v_tq - q * (q - 1) * d
        beyond = v_g_term >= target_g and v_d_term >= target_d
        increasing = prev is None or (v_g_term >= prev[0] and v_d_term >= prev[1])
        if beyond and increasing:
            break
        prev = (v_g_term, v_d_term)
        need_t = max(Fraction(target_g) + q, Fraction(target_d) + q * (q - 1) * d)
        for a in pr.monic_of_degree(ctx.base, d):
            term = t_pow_qm1(ctx, z_el, pt, a, need_t)
            if term is None:
                continue
            max_deg_a = max(max_deg_a, d)
            e_c_terms = max(e_c_terms, term.e_c_terms)
            gsum = _truncate(gsum + term.value, Fraction(target_g) + q)
            apow = ctx.poly_series(a ** (q * (q - 1)))
            dsum = _truncate(dsum + _scale_poly(term.value, apow), target_d)
        d += 1
        if d > 40:  # pragma: no cover
            raise InvariantError("a-sum did not terminate")
    bracket = ctx.poly_series(pr.parse_poly(ctx.base, f"T^{q}") - pr.T(ctx.base))
    one_el = (
        LaurentSeries.one(ctx.cdesc, None)
        if qctx is None
        else QuadSeries.one(qctx, None)
    )
    gt = one_el - _truncate(_scale_poly(gsum, bracket), target_g)
    dt = -dsum
    return gt, dt, {"max_deg_a": max_deg_a, "e_c_terms": e_c_terms}


def eval_j(pt: CMPoint, prec: int, *, check: bool = True, cdesc: FieldDesc | None = None) -> JValue:
    """j(z) to absolute precision `prec`; its valuation must match the exact formula.

    Retries once with enlarged internal targets on a tracked-precision
    shortfall, then raises PrecisionError.
    """
    vj = -log_abs_j(pt)
    q = pt.order.field.q
    theta = Fraction(q, q - 1) - pt.eps
    v_d = (q - 1) * theta * q**pt.n
    v_g = (Fraction(vj) + v_d) / (q + 1)
    margin = 6
    for _ in range(3):
        target = Fraction(prec)
        target_g = target + v_d - q * v_g + margin
        target_d = target + 2 * v_d - (q + 1) * v_g + margin
        work = int(math.ceil(max(target_g, target_d, target))) + margin
        ctx = _context_for(pt.order, work + 4, cdesc)
        if pt.order.field.infinite_type == "inert":
            z_el = embed(pt.z, work + 4, coeff_desc=cdesc)
        else:
            z_el = embed(pt.z, work + 4, coeff_desc=ctx.cdesc)
        gt, dt, plan = eval_gt_dt(ctx, pt, z_el, target_g, target_d)
        v_dt = _valuation(dt)
        if v_dt != v_d:
            raise InvariantError(f"v(dt) = {v_dt}, expected {v_d} at point a={pt.a}, b={pt.b}")
        num = gt
        for _ in range(q):
            num = num * gt
        jval = _truncate(num * dt.inverse(), prec)
        got_prec = jval.prec if isinstance(jval, LaurentSeries) else jval.prec_q()
        if got_prec is not None and Fraction(got_prec) < prec:
            margin *= 3
            continue
        v_got = _valuation(jval)
        if check and v_got != vj:
            raise InvariantError(
                f"numeric valuation of j is {v_got}, exact formula says {vj} (order {pt.order.label()}, a={pt.a}, b={pt.b})"
            )
        return JValue(pt, jval, v_got if v_got is not None else vj, plan)
    raise PrecisionError(f"could not reach precision {prec} for j at point a={pt.a}")


def eval_j_valuation(pt: CMPoint) -> Fraction:
    """-v(j) resolved numerically with just enough digits; cross-checked against the formula."""
    vj = -log_abs_j(pt)
    jv = eval_j(pt, int(math.ceil(vj)) + 4)
    return -jv.v


# ---------------------------------------------------------------------------
# appendix lemmas as runnable checks


def verify_lemma_A1(pt: CMPoint, max_deg_a: int = 2, extra_prec: int = 6) -> list:
    """v(t(az)) = (q/(q-1) - eps) q^(n + deg a) and the companion for delta_a.

    Returns one report row per monic a with deg a <= max_deg_a; every row's
    `ok` must be True (exact Fraction equality of valuations).  Each sum is
    resolved with a small relative window around its own valuation, so the
    check stays cheap even at points with huge |t|-valuations.
    """
    order = pt.order
    q = order.field.q
    theta = Fraction(q, q - 1) - pt.eps
    rows = []
    ctx = _context_for(order, extra_prec + 3 * q + 14)
    zprec = pt.n + extra_prec + 14
    z_el = embed(pt.z, zprec, coeff_desc=None if order.field.infinite_type == "inert" else ctx.cdesc)
    for d in range(max_deg_a + 1):
        for a in pr.monic_of_degree(order.field.base, d):
            v_t_expected = theta * q ** (pt.n + d)
            v_s = -v_t_expected + Fraction(q, q - 1)
            s_val, _ = carlitz_S(ctx, z_el, pt, a, v_s + extra_prec)
            v_t_computed = -( _valuation(s_val) - Fraction(q, q - 1))
            # delta_a = 1/t(az) - pi a z = pi*(S_a - az): v = -theta q^(n+deg a)
            az = _scale_poly(z_el, ctx.poly_series(a))
            r_val = s_val - az
            v_r = _valuation(r_val)
            v_delta = v_r - Fraction(q, q - 1) if v_r is not None else None
            rows.append(
                {
                    "a": str(a),
                    "v_t_expected": v_t_expected,
                    "v_t_computed": v_t_computed,
                    "v_delta_expected": -v_t_expected,
                    "v_delta_computed": v_delta,
                    "ok": v_t_computed == v_t_expected and v_delta == -v_t_expected,
                }
            )
    return rows


def verify_lemma_A2(pt: CMPoint, delta: int, mu: int, nu: int, extra_prec: int = 8) -> dict:
    """Valuation of sum_a a^mu t(az)^delta delta_a(z)^nu (period-free bookkeeping).

    Hypotheses: delta >= nu + 1 and mu < q^n (delta - nu)(q - eps(q-1)).
    The sum equals pi^(nu - delta) * Q with Q = sum_a a^mu S_a^(-delta) R_a^nu,
    R_a = S_a - az, so its valuation is (delta-nu) q/(q-1) + v(Q); the lemma
    predicts (delta - nu)(q/(q-1) - eps) q^n.
    """
    order = pt.order
    q = order.field.q
    if delta < nu + 1:
        raise BadInputError("need delta >= nu + 1")
    gamma = delta - nu
    theta = Fraction(q, q - 1) - pt.eps
    if mu >= q**pt.n * gamma * (q - pt.eps * (q - 1)):
        raise BadInputError("mu too large for the valuation lemma")
    expected = gamma * theta * q**pt.n
    expected_q = expected - gamma * Fraction(q, q - 1)  # valuation of Q
    target_q = expected_q + extra_prec
    rel = (delta + nu + 2) * (extra_prec + q + 6)
    ctx = _context_for(order, rel)
    zprec = pt.n + extra_prec + 14
    z_el = embed(pt.z, zprec, coeff_desc=None if order.field.infinite_type == "inert" else ctx.cdesc)
    qsum = None
    d = 0
    while True:
        # v of the a-term of Q: gamma*theta*q^(n+d) - mu*d - gamma*q/(q-1)
        v_term = gamma * theta * q ** (pt.n + d) - mu * d - gamma * Fraction(q, q - 1)
        if v_term >= target_q and d > 0:
            break
        v_s = -theta * q ** (pt.n + d) + Fraction(q, q - 1)
        s_window = extra_prec + q + 4
        for a in pr.monic_of_degree(order.field.base, d):
            az = _scale_poly(z_el, ctx.poly_series(a))
            s_val, _ = carlitz_S(ctx, z_el, pt, a, v_s + s_window)
            r_val = s_val - az
            # S_a^(-delta), R_a^nu
            s_inv = s_val.inverse()
            acc = None
            for _ in range(delta):
                acc = s_inv if acc is None else acc * s_inv
            for _ in range(nu):
                acc = acc * r_val
            apow = ctx.poly_series(a**mu)
            acc = _scale_poly(acc, apow)
            qsum = acc if qsum is None else qsum + acc
        d += 1
        if d > 12:  # pragma: no cover
            raise InvariantError("A2 sum did not terminate")
    v_q = _valuation(_truncate(qsum, target_q))
    total = v_q + gamma * Fraction(q, q - 1) if v_q is not None else None
    return {
        "delta": delta,
        "mu": mu,
        "nu": nu,
        "expected": expected,
        "computed": total,
        "ok": total == expected,
    }


# ---------------------------------------------------------------------------
# Hilbert class polynomials


@dataclass
class HilbertPoly:
    """monic product of (X - j_i) over the distinct conjugates, rounded exactly.

    Separable flavors: coefficients in A.  Inseparable flavor: coefficients
    x + y*sqrt(T) with x, y in A.  residual[i] is the number of exactly-zero
    fractional digits certifying the rounding of coefficient i.
    """

    order: Order
    coeffs: list  # list of Poly, or of (Poly, Poly) pairs for even_insep
    residuals: list
    m: int
    plan: dict

    def constant_term_degree(self) -> Fraction:
        c = self.coeffs[0]
        if isinstance(c, tuple):
            x, y = c
            tpoly = pr.T(x.field)
            n = x * x + tpoly * y * y
            return Fraction(n.deg, 2)
        return Fraction(c.deg) if not c.is_zero() else Fraction(-1)

    def to_jsonable(self):
        def enc(c):
            if isinstance(c, tuple):
                return {"x": pr.poly_to_codes(c[0]), "y": pr.poly_to_codes(c[1])}
            return pr.poly_to_codes(c)

        return {
            "order": self.order.to_jsonable(),
            "degree": self.m,
            "coefficients": [enc(c) for c in self.coeffs],
            "residual_valuations": self.residuals,
            "truncation": self.plan,
        }


def _round_series_to_A(s: LaurentSeries, base: FieldDesc):
    """Round a flat series to a polynomial with coefficients in F_q."""
    from .ffield import embedding_table
    from .quadfield import series_component

    poly2, tail = s.polynomial_part()
    if tail is not None:
        raise InvariantError(f"coefficient has a nonzero digit at exponent {tail}: not in A")
    if s.prec is None:
        residual = None
    else:
        residual = s.prec
    if s.field == base:
        return poly2, residual
    # restrict F_{q^2} coefficients to the F_q image
    comp1 = series_component(s, 1)
    if not comp1.is_zero_known():
        raise InvariantError("coefficient not Galois-stable: F_{q^2}-part is nonzero")
    comp0 = series_component(s, 0)
    poly, tail0 = comp0.polynomial_part()
    if tail0 is not None:
        raise InvariantError("unexpected tail after component split")  # pragma: no cover
    return poly, residual


def hilbert_poly(order: Order, extra_prec: int = GUARD) -> HilbertPoly:
    """Assemble the monic class polynomial from the distinct conjugates."""
    mods0 = moduli_list(order)
    sum_pos = sum(max(Fraction(0), s.log_j) for s in mods0)
    W = int(math.ceil(sum_pos)) + extra_prec + 6
    from .brownval import moduli_of

    mods = moduli_of(order, value_prec=W, expected=len(mods0))
    qctx = None
    vals = []
    plans: dict = {}
    for s in mods:
        jv = eval_j(s.points[0], W)
        plans = {k: max(plans.get(k, 0), v) for k, v in jv.plan.items()}
        vals.append(jv.value)
        if isinstance(jv.value, QuadSeries):
            qctx = jv.value.ctx
    # expand prod (X - j_i)
    if qctx is None:
        coeffs = [LaurentSeries.one(vals[0].field, None)]
        zero = LaurentSeries.zero(vals[0].field, None)
    else:
        coeffs = [QuadSeries.one(qctx, None)]
        zero = QuadSeries.zero(qctx, None)
    for v in vals:
        new = [zero] * (len(coeffs) + 1)
        for i, c in enumerate(coeffs):
            new[i + 1] = new[i + 1] + c
            new[i] = new[i] - c * v
        coeffs = new
    base = order.field.base
    rounded = []
    residuals = []
    for c in coeffs:
        if isinstance(c, QuadSeries):
            if order.field.flavor == "even_insep":
                px, rx = _round_series_to_A(c.x, base)
                py, ry = _round_series_to_A(c.y, base)
                rounded.append((px, py))
                residuals.append(min(r for r in (rx, ry) if r is not None) if (rx or ry) else None)
            else:
                if not c.y.is_zero_known():
                    raise InvariantError("class polynomial coefficient has a nonzero xi-part")
                px, rx = _round_series_to_A(c.x, base)
                rounded.append(px)
                residuals.append(rx)
        else:
            pxy, rx = _round_series_to_A(c, base)
            rounded.append(pxy)
            residuals.append(rx)
    H = HilbertPoly(order, rounded, residuals, len(mods), plans)
    lead = H.coeffs[-1]
    if isinstance(lead, tuple):
        if not (lead[0].is_one() and lead[1].is_zero()):
            raise InvariantError("class polynomial is not monic")
    elif not lead.is_one():
        raise InvariantError("class polynomial is not monic")
    total = sum(s.log_j for s in mods)
    if H.constant_term_degree() != total:
        raise InvariantError(
            f"constant-term degree {H.constant_term_degree()} != sum of conjugate valuations {total}"
        )
    return H


def moduli_list(order: Order):
    from .brownval import moduli_of

    return moduli_of(order)


def unit_check(H: HilbertPoly):
    """('unit'|'nonunit', norm degree): constant term in F_q^x means unit."""
    deg = H.constant_term_degree()
    if deg == 0:
        return "unit", Fraction(0)
    return "nonunit", deg


def hilbert_constant_degree(order: Order) -> Fraction:
    """Degree of the class-polynomial constant term as sum of conjugate valuations.

    Each conjugate's valuation is individually verified against the numeric
    evaluator, so this equals the assembled polynomial's constant degree
    without building the full product.
    """
    mods = moduli_list(order)
    for s in mods:
        eval_j_valuation(s.points[0])
    return sum(s.log_j for s in mods)

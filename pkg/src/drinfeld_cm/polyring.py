"""Arithmetic and arithmetic-function toolkit for A = F_q[T].

Polynomials are immutable dense coefficient tuples (element codes,
low-to-high) over a FieldDesc.  The zero polynomial is the empty tuple and
its degree is the distinguished marker NEG_INF.

Besides ring arithmetic this module provides factorization (squarefree split
+ distinct-degree + seeded equal-degree splitting), the counting functions
d(a), omega(a), sigma_1(f), gcd_2, the quadratic character chi attached to an
imaginary quadratic extension, and the Mertens-style Euler product.
"""

from __future__ import annotations

import random
import threading
from fractions import Fraction

from .errors import BadInputError, InvariantError
from .ffield import FieldDesc

NEG_INF = float("-inf")

_factor_cache = {}
_factor_lock = threading.Lock()


class Poly:
    """Element of F_q[T] (dense, low-to-high coefficient codes)."""

    __slots__ = ("field", "coeffs")

    def __init__(self, fld: FieldDesc, coeffs):
        cs = list(coeffs)
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "field", fld)
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, *a):  # immutability
        raise AttributeError("Poly is immutable")

    # -- basics -------------------------------------------------------------

    @property
    def deg(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_one(self) -> bool:
        return self.coeffs == (1,)

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    @property
    def sgn(self) -> int:
        """Leading coefficient code (0 for the zero polynomial)."""
        return self.coeffs[-1] if self.coeffs else 0

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def monic(self) -> "Poly":
        if self.is_zero():
            raise BadInputError("monic() of zero polynomial")
        if self.is_monic():
            return self
        inv = self.field.inv(self.sgn)
        return Poly(self.field, [self.field.mul(inv, c) for c in self.coeffs])

    def norm_size(self) -> int:
        """|a| = q^deg a as an integer (BadInput on zero)."""
        if self.is_zero():
            raise BadInputError("|0| is not defined here")
        return self.field.q ** (len(self.coeffs) - 1)

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __eq__(self, other):
        return isinstance(other, Poly) and self.field == other.field and self.coeffs == other.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    # -- ring operations ------------------------------------------------------

    def _check(self, other):
        if self.field is not other.field and self.field != other.field:
            raise BadInputError("polynomials over different fields")

    def __add__(self, other):
        self._check(other)
        f = self.field
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = f.add(out[i], c)
        return Poly(f, out)

    def __neg__(self):
        f = self.field
        return Poly(f, [f.neg(c) for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        self._check(other)
        f = self.field
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly(f, ())
        out = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        out[i + j] = f.add(out[i + j], f.mul(ai, bj))
        return Poly(f, out)

    def scale(self, code: int) -> "Poly":
        f = self.field
        if code == 0:
            return Poly(f, ())
        return Poly(f, [f.mul(code, c) for c in self.coeffs])

    def shift(self, k: int) -> "Poly":
        """Multiply by T^k (k >= 0)."""
        if self.is_zero():
            return self
        return Poly(self.field, (0,) * k + self.coeffs)

    def __divmod__(self, other):
        self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        f = self.field
        rem = list(self.coeffs)
        db = other.deg
        lead_inv = f.inv(other.sgn)
        quot = [0] * max(0, len(rem) - db)
        while len(rem) - 1 >= db and rem:
            shift = len(rem) - 1 - db
            factor = f.mul(rem[-1], lead_inv)
            quot[shift] = factor
            for i, c in enumerate(other.coeffs):
                rem[shift + i] = f.sub(rem[shift + i], f.mul(factor, c))
            while rem and rem[-1] == 0:
                rem.pop()
        return Poly(f, quot), Poly(f, rem)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __pow__(self, e: int):
        if e < 0:
            raise BadInputError("negative polynomial power")
        result = Poly(self.field, (1,))
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def divides(self, other: "Poly") -> bool:
        return (other % self).is_zero()

    def eval_code(self, x: int) -> int:
        """Evaluate at a field element given by code."""
        f = self.field
        acc = 0
        for c in reversed(self.coeffs):
            acc = f.add(f.mul(acc, x), c)
        return acc

    def map_coeffs(self, table, fld2: FieldDesc) -> "Poly":
        """Push coefficients through a code table into another field."""
        return Poly(fld2, [table[c] for c in self.coeffs])

    def derivative(self) -> "Poly":
        f = self.field
        out = []
        for i, c in enumerate(self.coeffs[1:], start=1):
            out.append(f.mul(i % f.p, c))
        return Poly(f, out)

    # -- formatting -----------------------------------------------------------

    def __repr__(self):
        return f"Poly({format_poly(self)})"

    def __str__(self):
        return format_poly(self)


def poly(fld: FieldDesc, coeffs) -> Poly:
    return Poly(fld, coeffs)


def T(fld: FieldDesc) -> Poly:
    return Poly(fld, (0, 1))


def one(fld: FieldDesc) -> Poly:
    return Poly(fld, (1,))


def zero(fld: FieldDesc) -> Poly:
    return Poly(fld, ())


def poly_arith(a: Poly, b: Poly, kind: str):
    """Dispatch form: kind in {add, mul, divmod, gcd}."""
    if kind == "add":
        return a + b
    if kind == "mul":
        return a * b
    if kind == "divmod":
        return divmod(a, b)
    if kind == "gcd":
        return gcd(a, b)
    raise BadInputError(f"unknown arithmetic kind {kind!r}")


def gcd(a: Poly, b: Poly) -> Poly:
    while not b.is_zero():
        a, b = b, a % b
    if a.is_zero():
        return a
    return a.monic()


def gcd_many(ps) -> Poly:
    it = iter(ps)
    g = next(it)
    for x in it:
        g = gcd(g, x)
    return g


def xgcd(a: Poly, b: Poly):
    """(g, u, v) with g = u*a + v*b, g monic (or zero)."""
    f = a.field
    r0, r1 = a, b
    s0, s1 = one(f), zero(f)
    t0, t1 = zero(f), one(f)
    while not r1.is_zero():
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero():
        return r0, s0, t0
    inv = f.inv(r0.sgn)
    return r0.monic(), s0.scale(inv), t0.scale(inv)


def powmod(a: Poly, e: int, m: Poly) -> Poly:
    result = one(a.field)
    base = a % m
    while e:
        if e & 1:
            result = (result * base) % m
        base = (base * base) % m
        e >>= 1
    return result


# ---------------------------------------------------------------------------
# factorization


def _pth_root(a: Poly) -> Poly:
    """p-th root of a polynomial whose exponents are all multiples of p."""
    f = a.field
    p = f.p
    out = []
    for i in range(0, len(a.coeffs), p):
        c = a.coeffs[i]
        # p-th root of c: c^(p^(s-1))
        out.append(f.pow(c, f.order // p))
    return Poly(f, out)


def _rng_for(a: Poly, seed: int) -> random.Random:
    key = (seed, a.field.p, a.field.r, a.field.m) + a.coeffs
    return random.Random(repr(key))


def _equal_degree_split(f: Poly, d: int, rng: random.Random):
    """Split a squarefree product of degree-d irreducibles (Cantor-Zassenhaus)."""
    fld = f.field
    q = fld.q
    n = f.deg
    if n == d:
        return [f]
    while True:
        r = Poly(fld, [rng.randrange(fld.order) for _ in range(n)] + [1])
        g = gcd(r, f)
        if 1 <= g.deg < n:
            pass
        elif fld.p == 2:
            # trace map over F_2: sum r^(2^i), i < log2(q^d)
            e = d * fld.r * fld.m
            t = zero(fld)
            w = r % f
            for _ in range(e):
                t = t + w
                w = (w * w) % f
            g = gcd(t, f)
        else:
            w = powmod(r, (q**d - 1) // 2, f)
            g = gcd(w - one(fld), f)
        if 1 <= g.deg < n:
            return _equal_degree_split(g, d, rng) + _equal_degree_split(f // g, d, rng)


def _factor_squarefree(f: Poly, rng: random.Random):
    """Irreducible factors of a squarefree monic polynomial."""
    fld = f.field
    q = fld.q
    out = []
    w = T(fld) % f
    d = 0
    rest = f
    while rest.deg > 0:
        d += 1
        if 2 * d > rest.deg:
            out.append(rest)
            break
        w = powmod(w, q, rest)
        g = gcd(w - T(fld), rest)
        if g.deg >= 1:
            out.extend(_equal_degree_split(g, d, rng))
            rest = rest // g
            w = w % rest
    return out


def factor(a: Poly, seed: int = 0):
    """Factor a nonzero polynomial.

    Returns (sgn_code, [(monic irreducible, exponent), ...]) sorted by
    (degree, coefficient codes).  Deterministic for a given seed.
    """
    if a.is_zero():
        raise BadInputError("factor(0)")
    key = (a.field, a.coeffs, seed)
    with _factor_lock:
        hit = _factor_cache.get(key)
    if hit is not None:
        return hit
    sgn = a.sgn
    f = a.monic()
    rng = _rng_for(a, seed)
    factors = {}

    def accumulate(g: Poly, mult: int):
        if g.deg == 0:
            return
        der = g.derivative()
        if der.is_zero():
            accumulate(_pth_root(g), mult * g.field.p)
            return
        sf = g // gcd(g, der)
        rest = g
        for p_ in _factor_squarefree(sf, rng):
            e = 0
            while p_.divides(rest):
                rest = rest // p_
                e += 1
            factors[p_] = factors.get(p_, 0) + e * mult
        if rest.deg > 0:
            accumulate(rest, mult)

    accumulate(f, 1)
    items = sorted(factors.items(), key=lambda kv: (kv[0].deg, kv[0].coeffs))
    # postcondition: product reproduces the input
    check = one(a.field).scale(sgn)
    for p_, e in items:
        check = check * p_**e
    if check != a:
        raise InvariantError("factorization does not reproduce the input")  # pragma: no cover
    result = (sgn, tuple(items))
    with _factor_lock:
        _factor_cache[key] = result
    return result


def is_irreducible(a: Poly) -> bool:
    if a.deg < 1:
        return False
    _, items = factor(a)
    return len(items) == 1 and items[0][1] == 1 and items[0][0] == a.monic()


def is_square_poly(a: Poly) -> bool:
    """Whether a is a square in k = F_q(T) (equivalently in A, for a in A)."""
    if a.is_zero():
        return True
    from .ffield import FFElem, is_square as ff_is_square, sqrt as ff_sqrt

    sgn_code, items = factor(a)
    if any(e % 2 for _, e in items):
        return False
    if a.field.p == 2:
        return True  # every constant is a square in char 2
    return ff_is_square(FFElem(a.field, sgn_code))


def squarefree_split(a: Poly):
    """Write a = sgn * g^2 * d0 with d0 monic squarefree; returns (sgn, g, d0)."""
    sgn_code, items = factor(a)
    f = a.field
    g = one(f)
    d0 = one(f)
    for p_, e in items:
        g = g * p_ ** (e // 2)
        if e % 2:
            d0 = d0 * p_
    return sgn_code, g, d0


def gcd2(a: Poly, b: Poly) -> Poly:
    """The monic d of maximal degree with d^2 | a and d^2 | b."""
    if a.is_zero() or b.is_zero():
        raise BadInputError("gcd2 needs nonzero inputs")
    _, items = factor(a)
    f = a.field
    out = one(f)
    for p_, ea in items:
        eb = 0
        rest = b
        while p_.divides(rest):
            rest = rest // p_
            eb += 1
        k = min(ea // 2, eb // 2)
        if k:
            out = out * p_**k
    return out


def arith_stats(a: Poly):
    """omega(a), d(a) and sigma_1 of a nonzero polynomial.

    sigma_1(a) = sum over monic divisors d of |d| (an integer).
    """
    if a.is_zero():
        raise BadInputError("arith_stats(0)")
    _, items = factor(a)
    q = a.field.q
    omega = len(items)
    dcount = 1
    sigma1 = 1
    for p_, e in items:
        dcount *= e + 1
        pd = q**p_.deg
        sigma1 *= sum(pd**j for j in range(e + 1))
    return {"omega": omega, "d": dcount, "sigma1": sigma1}


def divisors(a: Poly):
    """All monic divisors (desk-scale helper used by test oracles)."""
    _, items = factor(a)
    out = [one(a.field)]
    for p_, e in items:
        new = []
        pk = one(a.field)
        for k in range(e + 1):
            new.extend(d * pk for d in out)
            if k < e:
                pk = pk * p_
        out = new
    return out


def count_monic_irreducibles(n: int, q: int) -> int:
    """Number of monic irreducibles of degree n via the Moebius/necklace formula."""
    if n <= 0:
        raise BadInputError("degree must be >= 1")
    total = 0
    for d in range(1, n + 1):
        if n % d == 0:
            total += _moebius(n // d) * q**d
    assert total % n == 0
    return total // n


def _moebius(n: int) -> int:
    out = 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return 0
            out = -out
        d += 1
    if n > 1:
        out = -out
    return out


def mertens_product(f: Poly) -> Fraction:
    """Exact prod_{P | f} (1 - 1/|P|)^{-1} for non-constant monic f."""
    if f.is_zero() or f.is_constant():
        raise BadInputError("mertens_product needs deg f >= 1")
    _, items = factor(f)
    q = f.field.q
    out = Fraction(1)
    for p_, _ in items:
        np_ = q**p_.deg
        out *= Fraction(np_, np_ - 1)
    return out


# ---------------------------------------------------------------------------
# quadratic character


def artin_schreier_solvable_mod(P: Poly, num: Poly, den: Poly) -> bool:
    """Whether x^2 + x = num/den is solvable in the residue field A/P (p = 2).

    Solved as an F_2-linear system on the residue field written in the basis
    1, T, ..., T^(deg P - 1); avoids constructing large extension fields.
    """
    fld = P.field
    if fld.p != 2:
        raise BadInputError("Artin-Schreier residue test requires p = 2")
    dP = P.deg
    # beta = num * den^{-1} mod P
    g, u, _ = xgcd(den % P, P)
    if not g.is_one():
        raise BadInputError("denominator not invertible mod P")
    beta = (num * u) % P
    s = fld.s  # F_q over F_2 degree
    dim = dP * s

    def to_bits(pol: Poly):
        bits = []
        cs = list(pol.coeffs) + [0] * (dP - len(pol.coeffs))
        for c in cs[:dP]:
            bits.extend(fld.coords(c))
        return bits

    def from_bits(bits):
        cs = []
        for i in range(dP):
            cs.append(fld.code(bits[i * s : (i + 1) * s]))
        return Poly(fld, cs)

    # matrix of y -> y^2 + y on the F_2-basis
    rows = [[0] * dim for _ in range(dim)]
    for j in range(dim):
        bits = [0] * dim
        bits[j] = 1
        y = from_bits(bits)
        img = (y * y + y) % P
        for i, bit in enumerate(to_bits(img)):
            rows[i][j] = bit
    target = to_bits(beta)
    # Gaussian elimination over F_2
    aug = [rows[i] + [target[i]] for i in range(dim)]
    rank = 0
    for col in range(dim):
        piv = None
        for rr in range(rank, dim):
            if aug[rr][col]:
                piv = rr
                break
        if piv is None:
            continue
        aug[rank], aug[piv] = aug[piv], aug[rank]
        for rr in range(dim):
            if rr != rank and aug[rr][col]:
                aug[rr] = [(x + y) % 2 for x, y in zip(aug[rr], aug[rank])]
        rank += 1
    for rr in range(rank, dim):
        if aug[rr][dim]:
            return False
    return True


def chi(P: Poly, K) -> int:
    """Quadratic character of an imaginary quadratic extension at a monic irreducible P.

    K is any object exposing .flavor and the defining data (D or B, C).
    Returns -1, 0 or +1; 0 at ramified primes.
    """
    if not is_irreducible(P):
        raise BadInputError("chi requires an irreducible P")
    P = P.monic()
    flavor = K.flavor
    if flavor == "odd":
        # ramification is governed by the fundamental discriminant sgn * D0
        sgn_code, _, d0 = squarefree_split(K.D)
        if P.divides(d0):
            return 0
        fld = P.field
        q = fld.q
        e = (q**P.deg - 1) // 2
        w = powmod(d0.scale(sgn_code), e, P)
        if w.is_one():
            return 1
        if w == one(fld).scale(fld.neg(1)):
            return -1
        raise InvariantError("Euler criterion did not land in {+-1}")  # pragma: no cover
    if flavor == "even_sep":
        if P.divides(K.C):
            return 0
        return 1 if artin_schreier_solvable_mod(P, K.B, K.C) else -1
    if flavor == "even_insep":
        return 0
    raise BadInputError(f"unknown flavor {flavor!r}")


def chi_of(a: Poly, K, seed: int = 0) -> int:
    """Multiplicative extension of chi to nonzero a (via factorization)."""
    if a.is_zero():
        raise BadInputError("chi_of(0)")
    _, items = factor(a, seed)
    out = 1
    for p_, e in items:
        c = chi(p_, K)
        if c == 0:
            if e:
                return 0
        elif c == -1 and e % 2:
            out = -out
    return out


# ---------------------------------------------------------------------------
# enumeration and sieving (desk scale)


def monic_of_degree(fld: FieldDesc, d: int):
    """All monic polynomials of degree d, in lexicographic code order."""
    if d < 0:
        return
    q_order = fld.order
    for v in range(q_order**d):
        cs = []
        t = v
        for _ in range(d):
            t, c = divmod(t, q_order)
            cs.append(c)
        yield Poly(fld, cs + [1])


def all_of_degree_less(fld: FieldDesc, d: int):
    """All polynomials (monic or not, including 0) of degree < d."""
    q_order = fld.order
    for v in range(q_order**d):
        cs = []
        t = v
        for _ in range(d):
            t, c = divmod(t, q_order)
            cs.append(c)
        yield Poly(fld, cs)


def poly_code(a: Poly) -> int:
    """Integer code of a polynomial (base-order digits of coefficient codes)."""
    v = 0
    for c in reversed(a.coeffs):
        v = v * a.field.order + c
    return v


def spf_table(fld: FieldDesc, maxdeg: int):
    """Smallest-prime-factor table for all monic polynomials of degree <= maxdeg.

    Keys and values are poly codes; irreducibles are exactly the monic
    polynomials of degree >= 1 that map to themselves.
    """
    spf = {}
    monics_by_deg = [list(monic_of_degree(fld, d)) for d in range(maxdeg + 1)]
    for d in range(1, maxdeg + 1):
        for P in monics_by_deg[d]:
            cp = poly_code(P)
            if cp in spf:
                continue
            spf[cp] = cp  # P is irreducible
            for md in range(0, maxdeg - d + 1):
                if md == 0:
                    continue
                for m_ in monics_by_deg[md]:
                    spf.setdefault(poly_code(P * m_), cp)
    return spf


def factor_with_spf(a: Poly, spf) -> list:
    """Factor a monic polynomial using a precomputed spf table."""
    items = {}
    rest = a.monic()
    fld = a.field
    while rest.deg > 0:
        cp = spf[poly_code(rest)]
        # decode the prime
        cs = []
        t = cp
        while t:
            t, c = divmod(t, fld.order)
            cs.append(c)
        P = Poly(fld, cs)
        e = 0
        while P.divides(rest):
            rest = rest // P
            e += 1
        items[P] = e
    return sorted(items.items(), key=lambda kv: (kv[0].deg, kv[0].coeffs))


# ---------------------------------------------------------------------------
# parsing / formatting


def format_poly(a: Poly, var: str = "T") -> str:
    if a.is_zero():
        return "0"
    parts = []
    for i in range(len(a.coeffs) - 1, -1, -1):
        c = a.coeffs[i]
        if c == 0:
            continue
        if i == 0:
            parts.append(str(c))
        else:
            head = "" if c == 1 else f"{c}*"
            parts.append(f"{head}{var}" if i == 1 else f"{head}{var}^{i}")
    return "+".join(parts)


def parse_poly(fld: FieldDesc, text: str) -> Poly:
    """Parse `[c0,c1,...]` or human form like `T^2+2*T+1` (codes as coefficients)."""
    text = text.strip()
    if text.startswith("["):
        inner = text.strip("[]").strip()
        if not inner:
            return zero(fld)
        return Poly(fld, [int(x) % fld.order for x in inner.split(",")])
    text = text.replace(" ", "").replace("-", "+-")
    if not text or text == "0":
        return zero(fld)
    coeffs = {}
    for term in text.split("+"):
        if not term:
            continue
        neg = term.startswith("-")
        if neg:
            term = term[1:]
        if "T" in term:
            head, _, tail = term.partition("T")
            c = int(head.rstrip("*")) if head.rstrip("*") else 1
            e = int(tail[1:]) if tail.startswith("^") else 1
        else:
            c, e = int(term), 0
        c %= fld.order
        if neg:
            c = fld.neg(c)
        coeffs[e] = fld.add(coeffs.get(e, 0), c)
    out = [0] * (max(coeffs) + 1)
    for e, c in coeffs.items():
        out[e] = c
    return Poly(fld, out)


def poly_to_codes(a: Poly) -> list:
    return list(a.coeffs)

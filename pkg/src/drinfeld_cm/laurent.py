"""Precision-tracked truncated Laurent series in 1/T over F_{q^m}.

A series is sum_{e >= n0} c_e T^(-e) with coefficients in a FieldDesc field;
the integer `prec` means the coefficients at exponents e >= prec are unknown
(`prec = None`: the series is exact, e.g. the image of a polynomial).  With
the valuation normalised by v(T) = -1, v(series) = n0 and |x| = q^(-n0).

Coefficients are stored as an int64 numpy array of F_p coordinates, shape
(s, L) with s = [F_{q^m} : F_p]; multiplication is s^2 numpy convolutions
combined through the basis-product tensor, so q-digit counts in the
thousands stay cheap.  Every operation propagates `prec` exactly: a digit is
either exactly known or beyond `prec`, there is no rounding noise anywhere.
"""

from __future__ import annotations

import numpy as np

from .errors import BadInputError, InvariantError, PrecisionError
from .ffield import FieldDesc, embedding_table
from .polyring import Poly

_np_cache: dict = {}


def _tensors(desc: FieldDesc):
    """Numpy copies of the basis-product tensor, Frobenius matrix, etc."""
    t = _np_cache.get(desc)
    if t is None:
        s = desc.s
        struct = np.zeros((s, s, s), dtype=np.int64)
        bp = desc.basis_product_tensor()
        for i in range(s):
            for j in range(s):
                struct[i, j, :] = bp[i][j]
        frob = np.array(desc.frob_q_matrix(), dtype=np.int64).T  # rows = output coords
        t = {"struct": struct, "frob": frob, "scalar": {}}
        _np_cache[desc] = t
    return t


def _scalar_matrix(desc: FieldDesc, code: int):
    t = _tensors(desc)
    m = t["scalar"].get(code)
    if m is None:
        m = np.array(desc.scalar_matrix(code), dtype=np.int64).T
        t["scalar"][code] = m
    return m


def _raw_mul(desc: FieldDesc, A: np.ndarray, B: np.ndarray, ncols: int | None = None) -> np.ndarray:
    """Convolution product of coordinate arrays, optionally truncated to ncols."""
    s = desc.s
    La, Lb = A.shape[1], B.shape[1]
    if La == 0 or Lb == 0:
        return np.zeros((s, 0), dtype=np.int64)
    Lout = La + Lb - 1
    if ncols is not None:
        Lout = min(Lout, ncols)
        if La > Lout:
            A = A[:, :Lout]
            La = Lout
        if Lb > Lout:
            B = B[:, :Lout]
            Lb = Lout
    if s == 1:
        # prime field: one convolution, no basis bookkeeping
        out = np.convolve(A[0], B[0])[None, :Lout] % desc.p
        return out
    struct = _tensors(desc)["struct"]
    out = np.zeros((s, La + Lb - 1), dtype=np.int64)
    for i in range(s):
        if not A[i].any():
            continue
        for j in range(s):
            if not B[j].any():
                continue
            conv = np.convolve(A[i], B[j])
            coeffs = struct[i, j]
            for k in range(s):
                if coeffs[k]:
                    out[k] += coeffs[k] * conv
    out %= desc.p
    return out[:, :Lout]


def _min_prec(*ps):
    vals = [p for p in ps if p is not None]
    return min(vals) if vals else None


class LaurentSeries:
    """Immutable truncated Laurent series with exact precision tracking."""

    __slots__ = ("field", "n0", "comps", "prec")

    def __init__(self, fld: FieldDesc, n0: int, comps, prec):
        comps = np.asarray(comps, dtype=np.int64)
        if comps.ndim != 2 or comps.shape[0] != fld.s:
            raise BadInputError("component array must have shape (s, L)")
        comps = comps % fld.p
        # drop columns at exponents >= prec
        if prec is not None and comps.shape[1] > prec - n0:
            comps = comps[:, : max(0, prec - n0)]
        # strip leading zeros (raising n0) and trailing zeros (known zeros stay implicit)
        nz = np.flatnonzero(comps.any(axis=0))
        if nz.size == 0:
            comps = comps[:, :0]
            n0 = 0
        else:
            comps = comps[:, nz[0] : nz[-1] + 1]
            n0 = n0 + int(nz[0])
        comps.setflags(write=False)
        object.__setattr__(self, "field", fld)
        object.__setattr__(self, "n0", n0)
        object.__setattr__(self, "comps", comps)
        object.__setattr__(self, "prec", prec)

    def __setattr__(self, *a):
        raise AttributeError("LaurentSeries is immutable")

    # -- constructors --------------------------------------------------------

    @staticmethod
    def zero(fld: FieldDesc, prec=None) -> "LaurentSeries":
        return LaurentSeries(fld, 0, np.zeros((fld.s, 0), dtype=np.int64), prec)

    @staticmethod
    def one(fld: FieldDesc, prec=None) -> "LaurentSeries":
        return LaurentSeries.constant(fld, 1, prec)

    @staticmethod
    def constant(fld: FieldDesc, code: int, prec=None) -> "LaurentSeries":
        comps = np.array(fld.coords(code), dtype=np.int64).reshape(fld.s, 1)
        return LaurentSeries(fld, 0, comps, prec)

    @staticmethod
    def from_codes(fld: FieldDesc, n0: int, codes, prec=None) -> "LaurentSeries":
        comps = np.zeros((fld.s, len(codes)), dtype=np.int64)
        for j, c in enumerate(codes):
            comps[:, j] = fld.coords(c)
        return LaurentSeries(fld, n0, comps, prec)

    @staticmethod
    def from_poly(a: Poly, fld: FieldDesc | None = None) -> "LaurentSeries":
        """Exact series of a polynomial; embeds coefficients if fld extends a.field."""
        src = a.field
        dst = fld or src
        if a.is_zero():
            return LaurentSeries.zero(dst)
        if dst == src:
            codes = list(a.coeffs)
        else:
            table = embedding_table(src, dst)
            codes = [table[c] for c in a.coeffs]
        # coefficient of T^i sits at exponent -i
        return LaurentSeries.from_codes(dst, -a.deg, list(reversed(codes)))

    @staticmethod
    def t_power(fld: FieldDesc, k: int, prec=None) -> "LaurentSeries":
        """T^k (any integer k), i.e. the exponent -k in 1/T."""
        return LaurentSeries.from_codes(fld, -k, [1], prec)

    # -- inspection ------------------------------------------------------------

    def is_zero_known(self) -> bool:
        """No nonzero digit among the known ones."""
        return self.comps.shape[1] == 0

    def valuation(self):
        """v_infinity, or None when indistinguishable from 0 at this precision."""
        return self.n0 if self.comps.shape[1] else None

    def val_bound(self):
        """Exact valuation, or (for a 0-looking series) the precision lower bound."""
        if self.comps.shape[1]:
            return self.n0
        return self.prec  # may be None: exact zero has valuation +infinity

    def sgn_code(self) -> int:
        """Leading coefficient code (sgn); BadInput on a 0-looking series."""
        if not self.comps.shape[1]:
            raise BadInputError("sgn of (0 mod precision)")
        return self.field.code(self.comps[:, 0].tolist())

    def coeff_code(self, e: int) -> int:
        """Coefficient code at exponent e (of T^-e); PrecisionError beyond prec."""
        if self.prec is not None and e >= self.prec:
            raise PrecisionError(f"coefficient at exponent {e} beyond precision {self.prec}")
        j = e - self.n0
        if j < 0 or j >= self.comps.shape[1]:
            return 0
        return self.field.code(self.comps[:, j].tolist())

    def __repr__(self):
        v = "zero" if self.is_zero_known() else str(self.n0)
        codes = [self.field.code(self.comps[:, j].tolist()) for j in range(min(self.comps.shape[1], 12))]
        more = "..." if self.comps.shape[1] > 12 else ""
        return f"v={v} prec={self.prec} coeffs=[{','.join(map(str, codes))}{more}]"

    def __eq__(self, other):
        return (
            isinstance(other, LaurentSeries)
            and self.field == other.field
            and self.n0 == other.n0
            and self.prec == other.prec
            and self.comps.shape == other.comps.shape
            and bool((self.comps == other.comps).all())
        )

    def __hash__(self):  # pragma: no cover
        raise TypeError("LaurentSeries is not hashable")

    # -- arithmetic --------------------------------------------------------------

    def _check(self, other):
        if self.field != other.field:
            raise BadInputError("series over different coefficient fields")

    def __add__(self, other):
        self._check(other)
        fld = self.field
        prec = _min_prec(self.prec, other.prec)
        cols = []
        for x in (self, other):
            if x.comps.shape[1]:
                cols.append((x.n0, x.n0 + x.comps.shape[1]))
        if not cols:
            return LaurentSeries.zero(fld, prec)
        lo = min(c[0] for c in cols)
        hi = max(c[1] for c in cols)
        if prec is not None:
            hi = min(hi, prec)
        out = np.zeros((fld.s, max(hi - lo, 0)), dtype=np.int64)
        for x in (self, other):
            L = x.comps.shape[1]
            if L:
                a = x.n0 - lo
                seg = min(L, out.shape[1] - a)
                if seg > 0:
                    out[:, a : a + seg] += x.comps[:, :seg]
        return LaurentSeries(fld, lo, out, prec)

    def __neg__(self):
        return LaurentSeries(self.field, self.n0, (-self.comps) % self.field.p, self.prec)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        self._check(other)
        fld = self.field
        va, vb = self.val_bound(), other.val_bound()
        pa = self.prec if self.prec is not None else None
        pb = other.prec if other.prec is not None else None
        # prec(xy) = min(prec_x + v(y), prec_y + v(x)), None-aware
        terms = []
        if pa is not None and vb is not None:
            terms.append(pa + vb)
        if pb is not None and va is not None:
            terms.append(pb + va)
        if (pa is not None and vb is None) or (pb is not None and va is None):
            # one factor is an exact zero: product is exact zero
            return LaurentSeries.zero(fld)
        prec = min(terms) if terms else None
        if self.is_zero_known() or other.is_zero_known():
            return LaurentSeries.zero(fld, prec)
        ncols = None if prec is None else prec - (self.n0 + other.n0)
        if ncols is not None and ncols <= 0:
            return LaurentSeries.zero(fld, prec)
        out = _raw_mul(fld, self.comps, other.comps, ncols)
        return LaurentSeries(fld, self.n0 + other.n0, out, prec)

    def scale(self, code: int) -> "LaurentSeries":
        """Multiply by a field constant."""
        if code == 0:
            return LaurentSeries.zero(self.field, self.prec)
        if code == 1:
            return self
        M = _scalar_matrix(self.field, code)
        return LaurentSeries(self.field, self.n0, (M @ self.comps) % self.field.p, self.prec)

    def mul_t_power(self, k: int) -> "LaurentSeries":
        """Multiply by T^k."""
        prec = None if self.prec is None else self.prec - k
        return LaurentSeries(self.field, self.n0 - k, self.comps, prec)

    def truncate(self, prec: int) -> "LaurentSeries":
        new = _min_prec(self.prec, prec)
        return LaurentSeries(self.field, self.n0, self.comps, new)

    def __pow__(self, e: int):
        if e < 0:
            raise BadInputError("negative power: use inverse() explicitly")
        result = LaurentSeries.one(self.field, None)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base if e > 1 else base
            e >>= 1
        return result

    def frobenius_q(self) -> "LaurentSeries":
        """x -> x^q: coefficientwise Frobenius with exponents dilated by q."""
        fld = self.field
        q = fld.q
        L = self.comps.shape[1]
        prec = None if self.prec is None else q * self.prec
        if L == 0:
            return LaurentSeries.zero(fld, prec)
        M = _tensors(fld)["frob"]
        mapped = (M @ self.comps) % fld.p
        out = np.zeros((fld.s, (L - 1) * q + 1), dtype=np.int64)
        out[:, ::q] = mapped
        return LaurentSeries(fld, q * self.n0, out, prec)

    def inverse(self) -> "LaurentSeries":
        """Multiplicative inverse by Newton iteration; requires finite precision."""
        if self.is_zero_known():
            raise PrecisionError("inversion of a series indistinguishable from 0")
        if self.prec is None:
            raise BadInputError("inverse of an exact series: truncate() first")
        fld = self.field
        v = self.n0
        ell = self.prec - v  # relative length
        U = self.comps  # unit part, exponents 0..L-1 relative
        c0 = fld.code(U[:, 0].tolist())
        y = np.array(fld.coords(fld.inv(c0)), dtype=np.int64).reshape(fld.s, 1)
        known = 1
        while known < ell:
            known = min(2 * known, ell)
            # y <- y + y*(1 - u*y) to `known` columns
            uy = _raw_mul(fld, U[:, :known], y, known)
            r = (-uy) % fld.p
            if r.shape[1] == 0:
                r = np.zeros((fld.s, 1), dtype=np.int64)
            r[:, 0] = (r[:, 0] + np.array(fld.coords(1), dtype=np.int64)) % fld.p
            corr = _raw_mul(fld, y, r, known)
            width = max(y.shape[1], corr.shape[1])
            ynew = np.zeros((fld.s, width), dtype=np.int64)
            ynew[:, : y.shape[1]] = y
            ynew[:, : corr.shape[1]] = (ynew[:, : corr.shape[1]] + corr) % fld.p
            y = ynew
        return LaurentSeries(fld, -v, y, self.prec - 2 * v)

    def sqrt(self) -> "LaurentSeries":
        """Canonical square root (odd characteristic).

        Requires even valuation and a square leading coefficient in the
        coefficient field; the branch is fixed by the canonical square root of
        the leading coefficient.
        """
        fld = self.field
        if fld.p == 2:
            raise BadInputError("sqrt() is for odd characteristic; char-2 squares are Frobenius images")
        if self.is_zero_known():
            return self
        v = self.n0
        if v % 2:
            raise BadInputError("sqrt of a series with odd valuation")
        from .ffield import FFElem, sqrt as ff_sqrt

        c0 = self.sgn_code()
        root0 = ff_sqrt(FFElem(fld, c0))
        if root0 is None:
            raise BadInputError("leading coefficient is not a square in the coefficient field")
        if self.prec is None:
            raise BadInputError("sqrt of an exact series: truncate() first")
        ell = self.prec - v
        # inverse square root of the unit part by Newton: r <- r + r*(1 - u r^2)/2
        U = self.comps
        inv2 = fld.inv(2 % fld.p)
        r = np.array(fld.coords(fld.inv(root0.code)), dtype=np.int64).reshape(fld.s, 1)
        known = 1
        while known < ell:
            known = min(2 * known, ell)
            r2 = _raw_mul(fld, r, r, known)
            ur2 = _raw_mul(fld, U[:, :known], r2, known)
            e = (-ur2) % fld.p
            if e.shape[1] == 0:
                e = np.zeros((fld.s, 1), dtype=np.int64)
            e[:, 0] = (e[:, 0] + np.array(fld.coords(1), dtype=np.int64)) % fld.p
            half_e = (_scalar_matrix(fld, inv2) @ e) % fld.p
            corr = _raw_mul(fld, r, half_e, known)
            width = max(r.shape[1], corr.shape[1])
            rnew = np.zeros((fld.s, width), dtype=np.int64)
            rnew[:, : r.shape[1]] = r
            rnew[:, : corr.shape[1]] = (rnew[:, : corr.shape[1]] + corr) % fld.p
            r = rnew
        invsqrt_unit = LaurentSeries(fld, 0, r, ell)
        unit = LaurentSeries(fld, 0, U, ell)
        y_unit = unit * invsqrt_unit  # sqrt of the unit part, leading coeff c0/root0 = root0
        y = y_unit.mul_t_power(-v // 2)
        return LaurentSeries(fld, y.n0, y.comps, self.prec - v // 2)

    def artin_schreier_root(self) -> "LaurentSeries":
        """Canonical y with y^2 + y = self (p = 2, valuation >= 0).

        The constant term's Artin-Schreier equation must be solvable in the
        coefficient field; callers extend to F_{q^2} first when it is not.
        """
        fld = self.field
        if fld.p != 2:
            raise BadInputError("artin_schreier_root requires p = 2")
        if not self.is_zero_known() and self.n0 < 0:
            raise BadInputError("artin_schreier_root requires valuation >= 0")
        if self.prec is None:
            raise BadInputError("artin_schreier_root of an exact series: truncate() first")
        from .ffield import FFElem, artin_schreier_solve

        P = self.prec
        s_codes = [self.coeff_code(e) for e in range(0, P)]
        roots = artin_schreier_solve(FFElem(fld, s_codes[0]))
        if roots is None:
            raise BadInputError("constant term has no Artin-Schreier root in this coefficient field")
        y = [roots[0].code] + [0] * (P - 1)
        for e in range(1, P):
            c = s_codes[e]
            if e % 2 == 0:
                half = y[e // 2]
                c = fld.add(c, fld.mul(half, half))
            y[e] = c
        return LaurentSeries.from_codes(fld, 0, y, P)

    # -- rounding helpers ---------------------------------------------------------

    def polynomial_part(self):
        """(Poly over the coefficient field, first nonzero tail exponent or None).

        The polynomial collects the digits at exponents <= 0; the tail scan
        covers every known digit at exponents >= 1.
        """
        fld = self.field
        if self.is_zero_known():
            return Poly(fld, ()), None
        if self.n0 < -(10**6):
            raise BadInputError("unreasonable polynomial degree")
        codes = []
        for e in range(self.n0, min(1, self.prec if self.prec is not None else 1)):
            codes.append(self.coeff_code(e))
        # codes are exponents n0..0 -> coefficients of T^(-n0)..T^0
        poly = Poly(fld, list(reversed(codes))) if self.n0 <= 0 else Poly(fld, ())
        tail = None
        start = max(1, self.n0)
        stop = self.n0 + self.comps.shape[1]
        for e in range(start, stop):
            if self.coeff_code(e) != 0:
                tail = e
                break
        return poly, tail


# ---------------------------------------------------------------------------
# Carlitz constants


def pi_power_qm1(fld: FieldDesc, prec: int) -> LaurentSeries:
    """The (q-1)-th power of the Carlitz period as a series over F_q^(m).

    pi^(q-1) = -T^q * prod_{k>=1} (1 - T^(1-q^k))^-(q-1); only this power is
    ever needed, which keeps all computations inside Laurent coefficients.
    """
    q = fld.q
    rel = prec + q + 1
    prod = LaurentSeries.one(fld, rel)
    k = 1
    while q**k - 1 < rel:
        tk = LaurentSeries.from_codes(fld, 0, [1] + [0] * (q**k - 2) + [fld.neg(1)], rel)
        prod = (prod * tk ** (q - 1)).truncate(rel)
        k += 1
    inv = prod.inverse()
    out = inv.mul_t_power(q).scale(fld.neg(1))
    return out.truncate(prec)


def carlitz_bracket(fld_poly, i: int) -> Poly:
    """[i] = T^(q^i) - T in A."""
    q = fld_poly.q
    coeffs = [0] * (q**i + 1)
    coeffs[1] = fld_poly.neg(1)
    coeffs[q**i] = fld_poly.add(coeffs[q**i], 1)
    return Poly(fld_poly, coeffs)


def carlitz_d(fld_poly, i: int) -> Poly:
    """D_i = prod_{k=0}^{i-1} (T^(q^i) - T^(q^k)); D_0 = 1."""
    out = Poly(fld_poly, (1,))
    q = fld_poly.q
    for k in range(i):
        coeffs = [0] * (q**i + 1)
        coeffs[q**k] = fld_poly.neg(1)
        coeffs[q**i] = fld_poly.add(coeffs[q**i], 1)
        out = out * Poly(fld_poly, coeffs)
    return out


def inverse_bracket_series(fld: FieldDesc, i: int, rel: int) -> LaurentSeries:
    """1/(T^(q^i) - T) as a series with `rel` known digits past the lead."""
    q = fld.q
    v = q**i
    gap = v - 1
    codes = []
    e = 0
    while e < rel:
        codes.extend([1] + [0] * (gap - 1))
        e += gap
    return LaurentSeries.from_codes(fld, v, codes[:rel], v + rel)


def carlitz_coefficient_series(fld: FieldDesc, imax: int, prec: int) -> list:
    """The series pi^(q^i - 1)/D_i for i = 0..imax, each to absolute precision prec.

    Built by the Frobenius recursion c_i = c_(i-1)^q * pi^(q-1) / [i]; the
    valuation of c_i is i*q^i - q*(q^i - 1)/(q - 1) and is asserted.
    """
    q = fld.q
    rel = prec + q + 1
    pi = pi_power_qm1(fld, max(prec, q + rel))
    out = [LaurentSeries.one(fld, prec)]
    for i in range(1, imax + 1):
        vi = i * q**i - q * (q**i - 1) // (q - 1)
        prev = out[i - 1]
        c = prev.frobenius_q() * pi
        c = c * inverse_bracket_series(fld, i, max(1, prec - vi + 2))
        c = c.truncate(prec)
        if not c.is_zero_known() and c.valuation() != vi:
            raise InvariantError(f"Carlitz coefficient valuation mismatch at i={i}")
        out.append(c)
    return out


def carlitz_constants(fld: FieldDesc, prec: int, d_count: int | None = None):
    """pi^(q-1) plus the exact D_i polynomials up to the e_C truncation scale."""
    from .polyring import Poly as _P  # noqa: F401

    pi = pi_power_qm1(fld, prec)
    if d_count is None:
        # default: all indices whose D_i stays desk-sized
        d_count = 0
        q = fld.q
        while (d_count + 1) * q ** (d_count + 1) <= max(10_000, 4 * prec):
            d_count += 1
    ds = [carlitz_d(fld, i) for i in range(d_count + 1)]
    return {"pi_qm1": pi, "D": ds}

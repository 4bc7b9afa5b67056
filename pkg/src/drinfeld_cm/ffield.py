"""Arithmetic in the coefficient fields F_q and F_{q^2}, q = p^r.

A field is described by (p, r, m) with m in {1, 2}; F_{p^(r*m)} is realised as
F_p[x]/(modulus), where the modulus is the lexicographically least monic
irreducible polynomial of degree r*m over F_p.  Descriptors are therefore
reproducible from (p, r, m) alone, and the chosen modulus is echoed in all
output headers.

Elements are integer codes: the base-p digits of the code are the coordinates
of the element in the power basis 1, x, x^2, ...  Zero and one are always the
codes 0 and 1.  Multiplication is schoolbook with a full table cached for
orders up to 256.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .errors import BadInputError, InvariantError

MAX_ORDER = 2**16

# ---------------------------------------------------------------------------
# small helpers for polynomials over F_p (coefficient lists, low-to-high)


def _pf_trim(c):
    while c and c[-1] == 0:
        c.pop()
    return c


def _pf_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _pf_trim(out)


def _pf_mod(a, m, p):
    # m monic
    a = list(a)
    dm = len(m) - 1
    while len(a) - 1 >= dm and a:
        lead = a[-1] % p
        if lead:
            shift = len(a) - 1 - dm
            for i, mi in enumerate(m):
                a[shift + i] = (a[shift + i] - lead * mi) % p
        a.pop()
    return _pf_trim(a)


def _pf_powmod(a, e, m, p):
    result = [1]
    base = _pf_mod(list(a), m, p)
    while e:
        if e & 1:
            result = _pf_mod(_pf_mul(result, base, p), m, p)
        base = _pf_mod(_pf_mul(base, base, p), m, p)
        e >>= 1
    return result


def _pf_gcd(a, b, p):
    a, b = list(a), list(b)
    while b:
        # make b monic
        inv = pow(b[-1], p - 2, p)
        b = [(c * inv) % p for c in b]
        a = _pf_mod(a, b, p)
        a, b = b, a
    return a


def _pf_is_irreducible(f, p):
    """Irreducibility of a monic polynomial over F_p (Rabin's test)."""
    n = len(f) - 1
    if n < 1:
        return False
    x = [0, 1]
    # x^(p^n) == x mod f
    w = list(x)
    for _ in range(n):
        w = _pf_powmod(w, p, f, p)
    if _pf_trim([(wi - xi) % p for wi, xi in itertools.zip_longest(w, x, fillvalue=0)]):
        return False
    for ell in _prime_divisors(n):
        w = list(x)
        for _ in range(n // ell):
            w = _pf_powmod(w, p, f, p)
        d = _pf_gcd([(wi - xi) % p for wi, xi in itertools.zip_longest(w, x, fillvalue=0)], f, p)
        if len(d) - 1 != 0:
            return False
    return True


def _prime_divisors(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _least_irreducible(p, n):
    """Lexicographically least monic irreducible of degree n over F_p.

    Candidates are ordered by the base-p value of (c_0, ..., c_{n-1}); the
    polynomial is c_0 + c_1 x + ... + x^n.
    """
    if n == 1:
        return (0, 1)  # x itself
    for v in range(p**n):
        c = []
        t = v
        for _ in range(n):
            t, d = divmod(t, p)
            c.append(d)
        f = c + [1]
        if _pf_is_irreducible(f, p):
            return tuple(f)
    raise InvariantError(f"no irreducible of degree {n} over F_{p}")  # pragma: no cover


def _is_prime(p):
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


# ---------------------------------------------------------------------------


class FieldDesc:
    """Descriptor of F_{p^(r*m)} with its tower data and cached tables.

    Use :func:`field` to obtain the canonical cached instance.
    """

    def __init__(self, p: int, r: int, m: int, modulus=None):
        if not _is_prime(p):
            raise BadInputError(f"p = {p} is not prime")
        if r < 1 or m not in (1, 2):
            raise BadInputError("need r >= 1 and m in {1, 2}")
        if p ** (r * m) > MAX_ORDER:
            raise BadInputError(f"field order {p**(r*m)} exceeds supported bound {MAX_ORDER}")
        self.p = p
        self.r = r
        self.m = m
        self.s = r * m  # degree over F_p
        self.q = p**r
        self.order = p ** (r * m)
        if modulus is None:
            modulus = _least_irreducible(p, self.s)
        else:
            modulus = tuple(int(c) % p for c in modulus)
            if len(modulus) != self.s + 1 or modulus[-1] != 1 or not _pf_is_irreducible(list(modulus), p):
                raise BadInputError("modulus must be monic irreducible of degree r*m over F_p")
        self.modulus = modulus
        self._mul_table = None
        self._inv_table = None
        self._sqrt_table = None
        self._scalar_mats = {}
        self._as_solver = None
        if self.order <= 256:
            self._build_tables()

    # -- encoding ----------------------------------------------------------

    def coords(self, code: int):
        """Base-p digits of a code (length s, low-to-high)."""
        out = []
        for _ in range(self.s):
            code, d = divmod(code, self.p)
            out.append(d)
        return out

    def code(self, coords) -> int:
        v = 0
        for d in reversed(list(coords)):
            v = v * self.p + (d % self.p)
        return v

    # -- construction of tables --------------------------------------------

    def _mul_raw(self, a: int, b: int) -> int:
        prod = _pf_mul(self.coords(a), self.coords(b), self.p)
        return self.code(_pf_mod(prod, list(self.modulus), self.p))

    def _build_tables(self):
        n = self.order
        table = [[0] * n for _ in range(n)]
        for a in range(n):
            for b in range(a, n):
                v = self._mul_raw(a, b)
                table[a][b] = v
                table[b][a] = v
        self._mul_table = table
        inv = [0] * n
        for a in range(1, n):
            inv[a] = self.pow(a, n - 2)
        self._inv_table = inv

    # -- code-level arithmetic ----------------------------------------------

    def add(self, a: int, b: int) -> int:
        p = self.p
        if p == 2:
            return a ^ b
        out = 0
        mult = 1
        while a or b:
            a, da = divmod(a, p)
            b, db = divmod(b, p)
            out += ((da + db) % p) * mult
            mult *= p
        return out

    def neg(self, a: int) -> int:
        p = self.p
        if p == 2:
            return a
        out = 0
        mult = 1
        while a:
            a, da = divmod(a, p)
            out += ((-da) % p) * mult
            mult *= p
        return out

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self._mul_table is not None:
            return self._mul_table[a][b]
        return self._mul_raw(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inversion of 0 in finite field")
        if self._inv_table is not None:
            return self._inv_table[a]
        return self.pow(a, self.order - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        e = int(e)
        if e < 0:
            a, e = self.inv(a), -e
        result = 1
        while e:
            if e & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            e >>= 1
        return result

    def frob_q(self, a: int) -> int:
        """x -> x^q, the relative Frobenius over F_q."""
        return self.pow(a, self.q)

    # -- scalars as F_p-linear maps (used by the series layer) ---------------

    def scalar_matrix(self, c: int):
        """Columns of multiplication-by-c on the power basis, as coordinate lists."""
        mat = self._scalar_mats.get(c)
        if mat is None:
            mat = tuple(tuple(self.coords(self.mul(c, self.p**j))) for j in range(self.s))
            self._scalar_mats[c] = mat
        return mat

    def frob_q_matrix(self):
        """Columns of x -> x^q on the power basis (an F_p-linear map)."""
        return tuple(tuple(self.coords(self.frob_q(self.p**j))) for j in range(self.s))

    def basis_product_tensor(self):
        """coords of g^i * g^j for the power basis, indexed [i][j]."""
        return tuple(
            tuple(tuple(self.coords(self._mul_raw(self.p**i, self.p**j))) for j in range(self.s))
            for i in range(self.s)
        )

    # -- traces --------------------------------------------------------------

    def trace_to_prime(self, a: int) -> int:
        """Absolute trace to F_p, returned as an integer in [0, p)."""
        acc = 0
        x = a
        for _ in range(self.s):
            acc = self.add(acc, x)
            x = self.pow(x, self.p)
        # acc lies in F_p: its code is the value
        return acc

    # -- misc ----------------------------------------------------------------

    def elements(self):
        return range(self.order)

    def elem(self, code_or_coords) -> "FFElem":
        if isinstance(code_or_coords, int):
            return FFElem(self, code_or_coords % self.order)
        return FFElem(self, self.code(code_or_coords))

    @property
    def zero(self) -> "FFElem":
        return FFElem(self, 0)

    @property
    def one(self) -> "FFElem":
        return FFElem(self, 1)

    @property
    def gen(self) -> "FFElem":
        """The class of x (a generator of the field over F_p, not of the unit group)."""
        return FFElem(self, self.p if self.s > 1 else 0)

    def header(self) -> str:
        """Serialized descriptor `p,r,m,[modulus coeffs]` for output headers."""
        return f"{self.p},{self.r},{self.m},[{','.join(str(c) for c in self.modulus)}]"

    def __repr__(self):
        return f"FieldDesc(p={self.p}, r={self.r}, m={self.m})"

    def __hash__(self):
        return hash((self.p, self.r, self.m, self.modulus))

    def __eq__(self, other):
        return (
            isinstance(other, FieldDesc)
            and (self.p, self.r, self.m, self.modulus) == (other.p, other.r, other.m, other.modulus)
        )


@lru_cache(maxsize=None)
def field(p: int, r: int = 1, m: int = 1, modulus=None) -> FieldDesc:
    """Canonical cached field descriptor for F_{p^(r*m)}."""
    return FieldDesc(p, r, m, modulus)


def quadratic_extension(fq: FieldDesc) -> FieldDesc:
    """The descriptor of F_{q^2} above a given F_q descriptor."""
    if fq.m != 1:
        raise BadInputError("quadratic_extension expects an F_q descriptor (m = 1)")
    return field(fq.p, fq.r, 2)


@lru_cache(maxsize=None)
def embedding_table(src: FieldDesc, dst: FieldDesc):
    """Code table of the canonical embedding F_{p^s} -> F_{p^(2s)}.

    The generator of src maps to the lexicographically least root of src's
    modulus inside dst; this fixes the embedding deterministically.
    """
    if not (src.p == dst.p and dst.s == 2 * src.s):
        raise BadInputError("embedding supported only into the quadratic extension")
    root = None
    for cand in range(dst.order):
        acc = 0
        xp = 1
        for c in src.modulus:
            if c:
                acc = dst.add(acc, dst.mul(c, xp))
            xp = dst.mul(xp, cand)
        if acc == 0:
            root = cand
            break
    if root is None:  # pragma: no cover
        raise InvariantError("no root of the subfield modulus found in the extension")
    table = [0] * src.order
    powers = [1]
    for _ in range(src.s - 1):
        powers.append(dst.mul(powers[-1], root))
    for a in range(src.order):
        acc = 0
        for digit, pw in zip(src.coords(a), powers):
            if digit:
                acc = dst.add(acc, dst.mul(digit, pw))
        table[a] = acc
    return tuple(table)


@dataclass(frozen=True)
class FFElem:
    """A finite-field element: a descriptor plus an integer code."""

    desc: FieldDesc
    code: int

    def _check(self, other):
        if self.desc is not other.desc and self.desc != other.desc:
            raise BadInputError("elements of different fields")

    def __add__(self, other):
        self._check(other)
        return FFElem(self.desc, self.desc.add(self.code, other.code))

    def __sub__(self, other):
        self._check(other)
        return FFElem(self.desc, self.desc.sub(self.code, other.code))

    def __neg__(self):
        return FFElem(self.desc, self.desc.neg(self.code))

    def __mul__(self, other):
        self._check(other)
        return FFElem(self.desc, self.desc.mul(self.code, other.code))

    def __truediv__(self, other):
        self._check(other)
        if other.code == 0:
            raise ZeroDivisionError("division by zero field element")
        return FFElem(self.desc, self.desc.div(self.code, other.code))

    def __pow__(self, e):
        return FFElem(self.desc, self.desc.pow(self.code, e))

    def __bool__(self):
        return self.code != 0

    def __repr__(self):
        return f"ff({self.code} in {self.desc.p}^{self.desc.s})"


def ff_arith(x: FFElem, y: FFElem, kind: str) -> FFElem:
    """Dispatch form of field arithmetic: kind in {add, mul, div}."""
    if kind == "add":
        return x + y
    if kind == "mul":
        return x * y
    if kind == "div":
        return x / y
    raise BadInputError(f"unknown arithmetic kind {kind!r}")


def is_square(x: FFElem) -> bool:
    """Euler test x^((q^m-1)/2) for odd q; 0 counts as a square."""
    desc = x.desc
    if desc.p == 2:
        raise BadInputError("is_square is defined for odd q only")
    if x.code == 0:
        return True
    return desc.pow(x.code, (desc.order - 1) // 2) == 1


def sqrt(x: FFElem):
    """Canonical square root in the element's own field, or None.

    Canonical choice: the root with the smaller integer code.
    """
    desc = x.desc
    if desc.p == 2:
        # squaring is bijective in char 2
        return FFElem(desc, desc.pow(x.code, desc.order // 2))
    if x.code == 0:
        return desc.zero
    if not is_square(x):
        return None
    tab = _sqrt_table(desc)
    return FFElem(desc, tab[x.code])


def _sqrt_table(desc: FieldDesc):
    if desc._sqrt_table is None:
        tab = {}
        for y in range(desc.order - 1, -1, -1):
            tab[desc.mul(y, y)] = y  # later (smaller) codes overwrite: canonical = min
        desc._sqrt_table = tab
    return desc._sqrt_table


def sqrt_fq2(x: FFElem) -> FFElem:
    """Square root in F_{q^2} of an element of F_q^x (q odd); always exists."""
    desc = x.desc
    if desc.p == 2:
        raise BadInputError("sqrt_fq2 requires odd q")
    if desc.m == 1:
        desc2 = quadratic_extension(desc)
        x = FFElem(desc2, embedding_table(desc, desc2)[x.code])
    r = sqrt(x)
    if r is None:  # pragma: no cover - every F_q element is a square in F_{q^2}
        raise InvariantError("element of F_q has no square root in F_{q^2}")
    return r


def artin_schreier_solve(c: FFElem):
    """Roots of y^2 + y = c in the element's field (p = 2), or None.

    Solvable iff the absolute trace of c to F_2 vanishes; the two roots differ
    by 1 and are returned as (least, least + 1).
    """
    desc = c.desc
    if desc.p != 2:
        raise BadInputError("artin_schreier_solve requires p = 2")
    if desc.trace_to_prime(c.code) != 0:
        return None
    solver = _as_solver(desc)
    root = solver(c.code)
    other = root ^ 1  # adding 1 flips the constant coordinate
    lo, hi = min(root, other), max(root, other)
    return FFElem(desc, lo), FFElem(desc, hi)


def _as_solver(desc: FieldDesc):
    """Solver for the F_2-linear map y -> y^2 + y via a precomputed echelon form."""
    if desc._as_solver is None:
        s = desc.s
        cols = []
        for j in range(s):
            y = desc.code([1 if i == j else 0 for i in range(s)])
            img = desc.add(desc.mul(y, y), y)
            cols.append(desc.coords(img))
        # Gaussian elimination over F_2 on the s x s matrix (columns = images)
        rows = []
        for i in range(s):
            rows.append([cols[j][i] for j in range(s)])

        def solve(code):
            target = desc.coords(code)
            a = [row[:] + [t] for row, t in zip(rows, target)]
            n = s
            piv_cols = []
            rank = 0
            for col in range(n):
                piv = None
                for rr in range(rank, n):
                    if a[rr][col]:
                        piv = rr
                        break
                if piv is None:
                    continue
                a[rank], a[piv] = a[piv], a[rank]
                for rr in range(n):
                    if rr != rank and a[rr][col]:
                        a[rr] = [(u + v) % 2 for u, v in zip(a[rr], a[rank])]
                piv_cols.append(col)
                rank += 1
            for rr in range(rank, n):
                if a[rr][n]:  # pragma: no cover - trace test already filtered
                    raise InvariantError("inconsistent Artin-Schreier system")
            sol = [0] * n
            for idx, col in enumerate(piv_cols):
                sol[col] = a[idx][n]
            return desc.code(sol)

        desc._as_solver = solve
    return desc._as_solver

"""Exact arithmetic in F_q (q = p^e) and in the polynomial ring A = F_q[theta].

Elements of F_q are packed integers in [0, q): the base-p digits of the
integer are the coordinates with respect to the power basis of the defining
modulus.  For prime fields this is plain arithmetic mod p.  Multiplication
and inversion go through discrete log tables built once per field; fields
are interned so tables are shared.

Polynomials are immutable tuples of packed field elements, trailing zeros
stripped.  deg(0) is the float('-inf') sentinel.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from functools import lru_cache

MAX_Q = 1 << 16
UNIT_ENUM_BUDGET = 1_000_000
# above this many candidate polynomials the irreducible scan switches to the
# vectorized sieve (ffpoly_batch)
_BATCH_THRESHOLD = 30_000

NEG_INF = float("-inf")


class FieldMismatchError(ValueError):
    """Operands belong to different fields."""


class NonMonicError(ValueError):
    """A monic polynomial was required."""


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for d in range(2, int(math.isqrt(n)) + 1):
        if n % d == 0:
            return False
    return True


def _fp_poly_mul(a, b, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def _fp_trim(a):
    a = list(a)
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    return a


def _fp_poly_mod(a, m, p):
    a = list(a)
    m = _fp_trim(m)
    dm = len(m) - 1
    inv_lead = pow(m[-1], -1, p)
    while len(a) - 1 >= dm and any(a):
        if a[-1] == 0:
            a.pop()
            continue
        c = (a[-1] * inv_lead) % p
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
        a.pop()
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    return a


def _fp_poly_powmod(base, n, m, p):
    result = [1]
    base = _fp_poly_mod(base, m, p)
    while n:
        if n & 1:
            result = _fp_poly_mod(_fp_poly_mul(result, base, p), m, p)
        base = _fp_poly_mod(_fp_poly_mul(base, base, p), m, p)
        n >>= 1
    return result


def _fp_poly_gcd(a, b, p):
    a, b = _fp_trim(a), _fp_trim(b)
    while any(b):
        a = _fp_poly_mod(a, b, p)
        a, b = b, a
    return _fp_trim(a)


def _fp_is_irreducible(m, p) -> bool:
    # Rabin test over F_p, used only to validate field moduli (degree <= 16)
    d = len(m) - 1
    if d < 1:
        return False
    x = [0, 1]
    xq = _fp_poly_powmod(x, p ** d, m, p)
    diff = [(xq[i] if i < len(xq) else 0) - (x[i] if i < len(x) else 0) for i in range(max(len(xq), 2))]
    diff = [c % p for c in diff]
    if any(diff):
        return False
    for r in {d // f for f in range(2, d + 1) if d % f == 0 and _is_prime(f)}:
        xr = _fp_poly_powmod(x, p ** r, m, p)
        diff = [(xr[i] if i < len(xr) else 0) - (x[i] if i < len(x) else 0) for i in range(max(len(xr), 2))]
        diff = [c % p for c in diff]
        g = _fp_poly_gcd(m, diff, p)
        if len(g) - 1 >= 1:
            return False
    return True


def _default_modulus(p: int, e: int):
    """Lexicographically smallest monic irreducible of degree e over F_p."""
    if e == 1:
        return (0, 1)
    for tail in itertools.product(range(p), repeat=e):
        m = list(tail) + [1]
        if _fp_is_irreducible(m, p):
            return tuple(m)
    raise ArithmeticError("no irreducible modulus found")  # unreachable


class FqField:
    """The finite field F_q, q = p^e, with packed-integer elements."""

    _interned: dict = {}

    def __new__(cls, p: int, e: int = 1, modulus=None):
        if not _is_prime(p):
            raise ValueError(f"p = {p} is not prime")
        if e < 1:
            raise ValueError("extension degree must be >= 1")
        q = p ** e
        if q > MAX_Q:
            raise ValueError(f"q = {q} exceeds the configured bound {MAX_Q}")
        if modulus is None:
            modulus = _default_modulus(p, e)
        modulus = tuple(c % p for c in modulus)
        if len(modulus) != e + 1 or modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree e over F_p")
        if e > 1 and not _fp_is_irreducible(list(modulus), p):
            raise ValueError("modulus is not irreducible over F_p")
        key = (p, e, modulus)
        if key in cls._interned:
            return cls._interned[key]
        self = super().__new__(cls)
        self.p, self.e, self.q, self.modulus = p, e, q, modulus
        self._build_tables()
        cls._interned[key] = self
        return self

    # -- packed element helpers -------------------------------------------

    def _unpack(self, a: int):
        digits = []
        for _ in range(self.e):
            a, r = divmod(a, self.p)
            digits.append(r)
        return digits

    def _pack(self, digits) -> int:
        a = 0
        for c in reversed(list(digits)):
            a = a * self.p + (c % self.p)
        return a

    def _raw_mul(self, a: int, b: int) -> int:
        prod = _fp_poly_mul(self._unpack(a), self._unpack(b), self.p)
        prod = _fp_poly_mod(prod, list(self.modulus), self.p)
        return self._pack(prod)

    def _build_tables(self):
        p, e, q = self.p, self.e, self.q
        if e == 1:
            self._exp = self._log = None
            self._add_table = None
            return
        # discrete log tables over a multiplicative generator
        gen = None
        factors = {f for f in range(2, q) if (q - 1) % f == 0 and _is_prime(f)}
        for cand in range(2, q):
            if all(self._pow_raw(cand, (q - 1) // f) != 1 for f in factors):
                gen = cand
                break
        exp = [1] * (q - 1)
        for i in range(1, q - 1):
            exp[i] = self._raw_mul(exp[i - 1], gen)
        log = [0] * q
        for i, v in enumerate(exp):
            log[v] = i
        self._gen = gen
        self._exp, self._log = exp, log
        if q <= 1024:
            add = [[0] * q for _ in range(q)]
            for a in range(q):
                da = self._unpack(a)
                for b in range(a, q):
                    db = self._unpack(b)
                    s = self._pack((x + y) % p for x, y in zip(da, db))
                    add[a][b] = s
                    add[b][a] = s
            self._add_table = add
        else:
            self._add_table = None

    def _pow_raw(self, a, n):
        r = 1
        while n:
            if n & 1:
                r = self._raw_mul(r, a)
            a = self._raw_mul(a, a)
            n >>= 1
        return r

    # -- field operations ---------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a + b) % self.p
        if self._add_table is not None:
            return self._add_table[a][b]
        return self._pack((x + y) % self.p for x, y in zip(self._unpack(a), self._unpack(b)))

    def neg(self, a: int) -> int:
        if self.e == 1:
            return (-a) % self.p
        return self._pack((-x) % self.p for x in self._unpack(a))

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self.e == 1:
            return (a * b) % self.p
        return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in F_q")
        if self.e == 1:
            return pow(a, -1, self.p)
        return self._exp[(-self._log[a]) % (self.q - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, n: int) -> int:
        if a == 0:
            if n == 0:
                return 1
            if n < 0:
                raise ZeroDivisionError
            return 0
        if self.e == 1:
            return pow(a, n % (self.p - 1) if n else 0, self.p) if n >= 0 else pow(self.inv(a), -n, self.p)
        return self._exp[(self._log[a] * n) % (self.q - 1)]

    def frobenius(self, a: int) -> int:
        """x -> x^p, the absolute Frobenius (identity on the prime field)."""
        return self.pow(a, self.p)

    @property
    def generator(self) -> int:
        if self.e == 1:
            factors = {f for f in range(2, self.p) if (self.p - 1) % f == 0 and _is_prime(f)}
            for cand in range(2, self.p):
                if all(pow(cand, (self.p - 1) // f, self.p) != 1 for f in factors):
                    return cand
            return 1  # F_2
        return self._gen

    def elements(self):
        return range(self.q)

    def __repr__(self):
        if self.e == 1:
            return f"F_{self.p}"
        return f"F_{self.p}^{self.e}"

    def __hash__(self):
        return hash((self.p, self.e, self.modulus))

    def __eq__(self, other):
        return self is other


class FqPoly:
    """Dense polynomial over an FqField in the variable theta. Immutable."""

    __slots__ = ("field", "coeffs", "_hash")

    def __init__(self, field: FqField, coeffs):
        coeffs = tuple(coeffs)
        while coeffs and coeffs[-1] == 0:
            coeffs = coeffs[:-1]
        self.field = field
        self.coeffs = coeffs
        self._hash = None

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, field):
        return cls(field, ())

    @classmethod
    def one(cls, field):
        return cls(field, (1,))

    @classmethod
    def constant(cls, field, c):
        return cls(field, (c % field.q if field.e == 1 else c,))

    @classmethod
    def gen(cls, field):
        """The variable theta."""
        return cls(field, (0, 1))

    @classmethod
    def monomial(cls, field, c, i):
        return cls(field, (0,) * i + (c,))

    # -- structure -----------------------------------------------------------

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    def is_zero(self):
        return not self.coeffs

    def is_one(self):
        return self.coeffs == (1,)

    def is_constant(self):
        return len(self.coeffs) <= 1

    def leading(self) -> int:
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def __getitem__(self, i) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    # -- ring operations ------------------------------------------------------

    def _check(self, other):
        if self.field is not other.field:
            raise FieldMismatchError(f"{self.field} vs {other.field}")

    def __add__(self, other):
        self._check(other)
        F = self.field
        n = max(len(self.coeffs), len(other.coeffs))
        return FqPoly(F, (F.add(self[i], other[i]) for i in range(n)))

    def __neg__(self):
        F = self.field
        return FqPoly(F, (F.neg(c) for c in self.coeffs))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        self._check(other)
        F = self.field
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return FqPoly.zero(F)
        out = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        out[i + j] = F.add(out[i + j], F.mul(ai, bj))
        return FqPoly(F, out)

    def scale(self, c: int):
        F = self.field
        return FqPoly(F, (F.mul(c, x) for x in self.coeffs))

    def __divmod__(self, other):
        self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        F = self.field
        rem = list(self.coeffs)
        db = other.degree
        inv_lead = F.inv(other.leading())
        quo = [0] * max(len(rem) - db, 0)
        while len(rem) - 1 >= db:
            if rem[-1] == 0:
                rem.pop()
                continue
            c = F.mul(rem[-1], inv_lead)
            shift = len(rem) - 1 - db
            quo[shift] = c
            for i, bi in enumerate(other.coeffs):
                rem[shift + i] = F.sub(rem[shift + i], F.mul(c, bi))
            rem.pop()
        return FqPoly(F, quo), FqPoly(F, rem)

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = FqPoly.one(self.field)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def powmod(self, n: int, modulus: "FqPoly") -> "FqPoly":
        result = FqPoly.one(self.field) % modulus
        base = self % modulus
        while n:
            if n & 1:
                result = (result * base) % modulus
            base = (base * base) % modulus
            n >>= 1
        return result

    def monic(self):
        if self.is_zero():
            return self
        return self.scale(self.field.inv(self.leading()))

    def derivative(self):
        F = self.field
        out = []
        for i in range(1, len(self.coeffs)):
            c = 0
            for _ in range(i % F.p):
                c = F.add(c, self.coeffs[i])
            out.append(c)
        return FqPoly(F, out)

    def evaluate(self, x: int) -> int:
        F = self.field
        acc = 0
        for c in reversed(self.coeffs):
            acc = F.add(F.mul(acc, x), c)
        return acc

    def gcd(self, other):
        self._check(other)
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic() if not a.is_zero() else a

    def extended_gcd(self, other):
        """Returns (g, s, t) with s*self + t*other = g, g monic (or zero)."""
        self._check(other)
        F = self.field
        r0, r1 = self, other
        s0, s1 = FqPoly.one(F), FqPoly.zero(F)
        t0, t1 = FqPoly.zero(F), FqPoly.one(F)
        while not r1.is_zero():
            q, r = divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, s0 - q * s1
            t0, t1 = t1, t0 - q * t1
        if r0.is_zero():
            return r0, s0, t0
        c = F.inv(r0.leading())
        return r0.scale(c), s0.scale(c), t0.scale(c)

    # -- misc ------------------------------------------------------------------

    def frobenius_spread(self, qpow: int = 1):
        """self(theta)^(q^qpow): spreads exponents by q^qpow (coeffs are in F_q)."""
        F = self.field
        step = F.q ** qpow
        out = [0] * (step * (len(self.coeffs) - 1) + 1) if self.coeffs else []
        for i, c in enumerate(self.coeffs):
            out[i * step] = c
        return FqPoly(F, out)

    def sort_key(self):
        return (len(self.coeffs), self.coeffs)

    def serialize(self) -> str:
        F = self.field
        body = ",".join(str(c) for c in self.coeffs) if self.coeffs else "0"
        return f"[{body}]@q={F.p}^{F.e}"

    @classmethod
    def parse_serialized(cls, s: str) -> "FqPoly":
        body, q = s.split("@q=")
        p, e = q.split("^")
        field = FqField(int(p), int(e))
        coeffs = [int(c) for c in body.strip("[]").split(",")] if body != "[0]" else []
        return cls(field, coeffs)

    def __repr__(self):
        if self.is_zero():
            return "0"
        terms = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            if i == 0:
                terms.append(str(c))
            elif i == 1:
                terms.append(("" if c == 1 else f"{c}*") + "theta")
            else:
                terms.append(("" if c == 1 else f"{c}*") + f"theta^{i}")
        return " + ".join(terms)

    def __eq__(self, other):
        return isinstance(other, FqPoly) and self.field is other.field and self.coeffs == other.coeffs

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((id(self.field), self.coeffs))
        return self._hash


@dataclass(frozen=True)
class FinitePlace:
    """A finite place of F_q(theta): a monic irreducible polynomial."""

    gen: FqPoly

    def __post_init__(self):
        if not self.gen.is_monic() or self.gen.degree < 1:
            raise NonMonicError("place generator must be monic of degree >= 1")

    @property
    def degree(self) -> int:
        return self.gen.degree

    @property
    def field(self):
        return self.gen.field

    def __repr__(self):
        return f"({self.gen!r})"


class InfinitePlace:
    """The distinguished place at infinity (uniformizer 1/theta, degree 1)."""

    degree = 1
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "v_inf"


INFINITY = InfinitePlace()


def is_infinite(place) -> bool:
    return isinstance(place, InfinitePlace)


# ---------------------------------------------------------------------------
# core operations
# ---------------------------------------------------------------------------


def poly_mul(a: FqPoly, b: FqPoly) -> FqPoly:
    """Exact product in A = F_q[theta]; raises FieldMismatchError."""
    return a * b


def is_irreducible(f: FqPoly) -> bool:
    """Rabin irreducibility test; requires monic input of degree >= 1."""
    if not f.is_monic():
        raise NonMonicError("irreducibility test requires a monic polynomial")
    d = f.degree
    if d < 1:
        raise NonMonicError("degree must be >= 1")
    if d == 1:
        return True
    F = f.field
    x = FqPoly.gen(F)
    # x^(q^d) = x mod f, and gcd(x^(q^(d/r)) - x, f) = 1 for prime r | d
    xq = _frob_power(x, d, f)
    if xq != x % f:
        return False
    for r in {f2 for f2 in range(2, d + 1) if d % f2 == 0 and _is_prime(f2)}:
        xr = _frob_power(x, d // r, f)
        if f.gcd(xr - x).degree >= 1:
            return False
    return True


def _frob_power(a: FqPoly, j: int, modulus: FqPoly) -> FqPoly:
    """a^(q^j) mod modulus via iterated q-power Frobenius substitution."""
    cur = a % modulus
    for _ in range(j):
        cur = cur.frobenius_spread(1) % modulus
    return cur


def _all_monics(field, d):
    for tail in itertools.product(range(field.q), repeat=d):
        yield FqPoly(field, tail + (1,))


@lru_cache(maxsize=None)
def _irreducible_list(field: FqField, d: int):
    """Sorted tuple of all monic irreducibles of degree exactly d."""
    if field.q ** d > _BATCH_THRESHOLD:
        from . import ffpoly_batch

        coeff_rows = ffpoly_batch.irreducible_coeffs(field, d, _irreducible_list)
        return tuple(FqPoly(field, row + (1,)) for row in coeff_rows)
    out = []
    small = [g for e in range(1, d // 2 + 1) for g in _irreducible_list(field, e)]
    for f in _all_monics(field, d):
        if d == 1:
            out.append(f)
            continue
        if any((f % g).is_zero() for g in small):
            continue
        out.append(f)
    return tuple(sorted(out, key=FqPoly.sort_key))


def irreducibles_of_degree(field: FqField, d: int):
    """Yields every monic irreducible of degree exactly d, in sorted order."""
    if d < 1:
        raise ValueError("degree must be >= 1")
    for f in _irreducible_list(field, d):
        yield FinitePlace(f)


def mobius(n: int) -> int:
    if n == 1:
        return 1
    result = 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return 0
            result = -result
        d += 1
    if n > 1:
        result = -result
    return result


def irreducible_count(q: int, d: int) -> int:
    """(1/d) * sum_{e | d} mu(d/e) q^e."""
    return sum(mobius(d // e) * q ** e for e in range(1, d + 1) if d % e == 0) // d


# -- factorization -----------------------------------------------------------


def _squarefree_decomposition(f: FqPoly):
    """Yields (g_i, i) with f = prod g_i^i, g_i squarefree (Yun, char p aware)."""
    F = f.field
    p = F.p
    out = {}

    def accumulate(g, mult):
        if g.degree >= 1:
            out[mult] = out.get(mult, FqPoly.one(F)) * g

    def rec(f, outer):
        d = f.derivative()
        if d.is_zero():
            # f = h(theta^p); take p-th root of coefficients
            root = FqPoly(F, [_fq_pth_root(F, f.coeffs[i])
                              for i in range(0, len(f.coeffs), p)])
            rec(root, outer * p)
            return
        c = f.gcd(d)
        w = f // c
        i = 1
        while w.degree >= 1:
            y = w.gcd(c)
            accumulate(w // y, outer * i)
            w, c = y, c // y
            i += 1
        # c now holds the factors of multiplicity divisible by p, at full
        # multiplicity; the p-th-root branch of the recursion scales them
        if c.degree >= 1:
            rec(c, outer)

    rec(f.monic(), 1)
    return [(g, mult) for mult, g in sorted(out.items())]


def _fq_pth_root(F: FqField, a: int) -> int:
    # a^(p^(e-1)) is the p-th root in F_{p^e}
    return F.pow(a, F.p ** (F.e - 1))


def _distinct_degree(f: FqPoly):
    """Yields (product of irreducible factors of degree d, d) for squarefree monic f."""
    F = f.field
    x = FqPoly.gen(F)
    cur = f
    h = x % f
    d = 0
    while cur.degree >= 1:
        d += 1
        if 2 * d > cur.degree:
            yield cur, cur.degree
            return
        h = h.frobenius_spread(1) % cur
        g = cur.gcd(h - x)
        if g.degree >= 1:
            yield g, d
            cur = cur // g
            h = h % cur
    return


def _equal_degree_split(f: FqPoly, d: int, rng: random.Random):
    """Cantor-Zassenhaus split of squarefree monic f, all factors of degree d."""
    F = f.field
    n = f.degree
    if n == d:
        return [f]
    q = F.q
    while True:
        a = FqPoly(F, [rng.randrange(q) for _ in range(n)] + [1])
        g = f.gcd(a)
        if 1 <= g.degree < n:
            break
        if F.p == 2:
            # additive trace T(a) = a + a^2 + ... + a^(2^(e*d - 1)) mod f
            acc = a % f
            t = a % f
            for _ in range(F.e * d - 1):
                t = (t * t) % f
                acc = acc + t
            g = f.gcd(acc)
        else:
            e = (q ** d - 1) // 2
            b = a.powmod(e, f) - FqPoly.one(F)
            g = f.gcd(b)
        if 1 <= g.degree < n:
            break
    left = _equal_degree_split(g.monic(), d, rng)
    right = _equal_degree_split((f // g).monic(), d, rng)
    return left + right


def factor(f: FqPoly):
    """Full factorization of monic f, deterministic output order.

    Returns a list of (FinitePlace-compatible monic irreducible, multiplicity),
    sorted by degree then lexicographically.  Equal-degree splitting is
    randomized internally but seeded from f for reproducibility.
    """
    if not f.is_monic() or f.degree < 1:
        raise NonMonicError("factor requires a monic polynomial of degree >= 1")
    rng = random.Random(hash((f.field.q, f.coeffs)) & 0xFFFFFFFF)
    factors = {}
    for g, mult in _squarefree_decomposition(f):
        for part, d in _distinct_degree(g):
            for irr in _equal_degree_split(part, d, rng):
                key = irr.monic()
                factors[key] = factors.get(key, 0) + mult
    out = sorted(factors.items(), key=lambda kv: kv[0].sort_key())
    # consistency: product reconstructs f
    check = FqPoly.one(f.field)
    for g, m in out:
        check = check * g ** m
    if check != f:
        raise ArithmeticError("factorization failed to reconstruct input")
    return out


# -- residue rings and unit groups -------------------------------------------


class ResidueRing:
    """A/m for monic m of degree >= 1 (not necessarily irreducible)."""

    def __init__(self, modulus: FqPoly):
        if not modulus.is_monic() or modulus.degree < 1:
            raise NonMonicError("residue ring modulus must be monic of degree >= 1")
        self.modulus = modulus
        self.field = modulus.field
        self.size = self.field.q ** modulus.degree
        self._factorization = None

    def reduce(self, a: FqPoly) -> FqPoly:
        return a % self.modulus

    def mul(self, a: FqPoly, b: FqPoly) -> FqPoly:
        return (a * b) % self.modulus

    def add(self, a: FqPoly, b: FqPoly) -> FqPoly:
        return a + b

    def pow(self, a: FqPoly, n: int) -> FqPoly:
        if n < 0:
            return self.pow(self.inv(a), -n)
        return a.powmod(n, self.modulus)

    def is_unit(self, a: FqPoly) -> bool:
        return a.gcd(self.modulus).is_one()

    def inv(self, a: FqPoly) -> FqPoly:
        g, s, _ = a.extended_gcd(self.modulus)
        if not g.is_one():
            raise ZeroDivisionError(f"{a!r} is not a unit modulo {self.modulus!r}")
        return s % self.modulus

    def factorization(self):
        if self._factorization is None:
            self._factorization = factor(self.modulus)
        return self._factorization

    def is_field(self) -> bool:
        fac = self.factorization()
        return len(fac) == 1 and fac[0][1] == 1

    def elements(self):
        F = self.field
        for tail in itertools.product(range(F.q), repeat=self.modulus.degree):
            yield FqPoly(F, tail)

    def units(self):
        for a in self.elements():
            if self.is_unit(a):
                yield a

    def unit_count(self) -> int:
        """|(A/m)^x| = q^deg m * prod_{P | m} (1 - q^(-deg P))."""
        n = self.size
        for place, _ in self.factorization():
            pd = self.field.q ** place.degree
            n = n // pd * (pd - 1)
        return n


class UnitGroup:
    """(A/m)^x presented by independent generators of prime-power order."""

    def __init__(self, ring: ResidueRing, generators, orders, dlog):
        self.ring = ring
        self.generators = list(generators)
        self.orders = list(orders)
        self.order = 1
        for o in self.orders:
            self.order *= o
        self._dlog = dlog

    def relation_lattice(self):
        """The relations among the generators: the diagonal lattice of the
        orders (the generators are independent by construction)."""
        r = len(self.orders)
        return [[self.orders[i] if i == j else 0 for j in range(r)] for i in range(r)]

    def dlog(self, u: FqPoly):
        key = self.ring.reduce(u).coeffs
        if key not in self._dlog:
            raise ValueError(f"{u!r} is not a unit modulo {self.ring.modulus!r}")
        return self._dlog[key]

    def element(self, exps) -> FqPoly:
        acc = FqPoly.one(self.ring.field)
        for g, o, e in zip(self.generators, self.orders, exps):
            acc = self.ring.mul(acc, self.ring.pow(g, e % o))
        return acc


def _abelian_basis(elements, mul, one, order):
    """Independent generators of prime-power order for a finite abelian group.

    elements: iterable of hashable group elements; mul/one: group law.
    Returns (generators, orders).  Greedy per-Sylow basis extraction with the
    classical correction step, so <g_1> x ... x <g_r> = G exactly.
    """
    def elem_pow(a, n):
        r = one
        while n:
            if n & 1:
                r = mul(r, a)
            a = mul(a, a)
            n >>= 1
        return r

    n = order
    prime_factors = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            v = 0
            while n % d == 0:
                n //= d
                v += 1
            prime_factors.append((d, v))
        d += 1
    if n > 1:
        prime_factors.append((n, 1))

    gens, orders = [], []
    elements = list(elements)
    for ell, v in prime_factors:
        cofactor = order // ell ** v
        sylow = {}
        for x in elements:
            y = elem_pow(x, cofactor)
            if y not in sylow:
                o = 1
                z = y
                while z != one:
                    z = elem_pow(z, ell)
                    o *= ell
                sylow[y] = o
        # greedy basis with corrections
        basis, basis_orders = [], []
        span = {one: ()}
        target = ell ** v
        while len(span) < target:
            best, best_ord = None, 0
            for y in sylow:
                # order of y modulo current span
                o = 1
                z = y
                while z not in span:
                    z = elem_pow(z, ell)
                    o *= ell
                if o > best_ord:
                    best, best_ord = y, o
            y, b = best, best_ord
            # correction: y^b lies in span; divide off the span part
            z = elem_pow(y, b)
            exps = span[z]
            adj = y
            for g, go, c in zip(basis, basis_orders, exps):
                # c is divisible by b; subtract g^(c/b)
                c_over_b = (c // b) % go if c % b == 0 else None
                if c_over_b is None:
                    raise ArithmeticError("basis correction failed")  # unreachable
                adj = mul(adj, elem_pow(g, (go - c_over_b) % go))
            basis.append(adj)
            basis_orders.append(b)
            new_span = {}
            for elem, exps in span.items():
                acc = elem
                for j in range(b):
                    new_span[acc] = exps + (j,)
                    acc = mul(acc, adj)
            span = new_span
        gens.extend(basis)
        orders.extend(basis_orders)
    return gens, orders


def unit_group(ring: ResidueRing, budget: int = UNIT_ENUM_BUDGET) -> UnitGroup:
    """Structure of (A/m)^x: independent generators with orders, plus dlog table.

    The group order is verified against the Euler-product closed form.
    """
    if ring.size > budget:
        raise ValueError(f"residue ring size {ring.size} exceeds budget {budget}")
    expected = ring.unit_count()
    units = [u.coeffs for u in ring.units()]
    if len(units) != expected:
        raise ArithmeticError("unit enumeration disagrees with Euler product")

    mod = ring.modulus

    def mul(a, b):
        return ((FqPoly(ring.field, a) * FqPoly(ring.field, b)) % mod).coeffs

    one = FqPoly.one(ring.field).coeffs
    gens, orders = _abelian_basis(units, mul, one, expected)
    # dlog table by full expansion; also validates independence
    dlog = {}
    gen_polys = [FqPoly(ring.field, g) for g in gens]
    for exps in itertools.product(*(range(o) for o in orders)):
        acc = FqPoly.one(ring.field)
        for g, e in zip(gen_polys, exps):
            acc = ring.mul(acc, ring.pow(g, e))
        key = acc.coeffs
        if key in dlog:
            raise ArithmeticError("generators are not independent")
        dlog[key] = exps
    if len(dlog) != expected:
        raise ArithmeticError("generator span does not cover the unit group")
    return UnitGroup(ring, gen_polys, orders, dlog)

"""The Carlitz module over A = F_q[theta]: twisted polynomials, torsion,
cyclotomic polynomials, and minimal polynomials of real-subfield generators.

rho is the F_q-algebra map A -> A{tau} with rho(theta) = theta + tau, where
tau is the q-power Frobenius (tau * omega = omega^q * tau).  The sign
normalization is the Carlitz convention sgn(1/theta) = 1, so rho_x is monic
for monic x.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .ffpoly import FqField, FqPoly, NonMonicError, ResidueRing, factor, unit_group


class TwistedPoly:
    """Element of A{tau} with the commutation rule tau * omega = omega^q * tau."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: FqField, coeffs):
        coeffs = list(coeffs)
        while coeffs and coeffs[-1].is_zero():
            coeffs.pop()
        self.field = field
        self.coeffs = tuple(coeffs)

    @classmethod
    def zero(cls, field):
        return cls(field, ())

    @classmethod
    def one(cls, field):
        return cls(field, (FqPoly.one(field),))

    @property
    def deg_tau(self):
        return len(self.coeffs) - 1 if self.coeffs else float("-inf")

    def constant_term(self) -> FqPoly:
        """D(sum a_i tau^i) = a_0, a ring morphism to A."""
        return self.coeffs[0] if self.coeffs else FqPoly.zero(self.field)

    def leading(self) -> FqPoly:
        if not self.coeffs:
            raise ValueError("zero twisted polynomial")
        return self.coeffs[-1]

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        zero = FqPoly.zero(self.field)
        return TwistedPoly(self.field, (
            (self.coeffs[i] if i < len(self.coeffs) else zero)
            + (other.coeffs[i] if i < len(other.coeffs) else zero)
            for i in range(n)))

    def __mul__(self, other):
        if not self.coeffs or not other.coeffs:
            return TwistedPoly.zero(self.field)
        zero = FqPoly.zero(self.field)
        out = [zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                if b.is_zero():
                    continue
                out[i + j] = out[i + j] + a * b.frobenius_spread(i)
        return TwistedPoly(self.field, out)

    def scale(self, c: FqPoly):
        return TwistedPoly(self.field, (c * a for a in self.coeffs))

    def __eq__(self, other):
        return isinstance(other, TwistedPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def to_additive(self) -> "AXPoly":
        """tau^i -> X^(q^i): the associated F_q-linear polynomial."""
        q = self.field.q
        if not self.coeffs:
            return AXPoly.zero(self.field)
        out = [FqPoly.zero(self.field)] * (q ** (len(self.coeffs) - 1) + 1)
        for i, a in enumerate(self.coeffs):
            out[q ** i] = a
        return AXPoly(self.field, out)

    def __repr__(self):
        if not self.coeffs:
            return "0"
        return " + ".join(f"({a!r})*tau^{i}" for i, a in enumerate(self.coeffs) if not a.is_zero())


class AXPoly:
    """Polynomial in X with coefficients in A = F_q[theta]."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: FqField, coeffs):
        coeffs = list(coeffs)
        while coeffs and coeffs[-1].is_zero():
            coeffs.pop()
        self.field = field
        self.coeffs = tuple(coeffs)

    @classmethod
    def zero(cls, field):
        return cls(field, ())

    @classmethod
    def one(cls, field):
        return cls(field, (FqPoly.one(field),))

    @classmethod
    def gen(cls, field):
        return cls(field, (FqPoly.zero(field), FqPoly.one(field)))

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else float("-inf")

    def __getitem__(self, i) -> FqPoly:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else FqPoly.zero(self.field)

    def is_zero(self):
        return not self.coeffs

    def is_monic(self):
        return bool(self.coeffs) and self.coeffs[-1].is_one()

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        return AXPoly(self.field, (self[i] + other[i] for i in range(n)))

    def __neg__(self):
        return AXPoly(self.field, (-c for c in self.coeffs))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if self.is_zero() or other.is_zero():
            return AXPoly.zero(self.field)
        zero = FqPoly.zero(self.field)
        out = [zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                if not b.is_zero():
                    out[i + j] = out[i + j] + a * b
        return AXPoly(self.field, out)

    def scale(self, c: FqPoly):
        return AXPoly(self.field, (c * a for a in self.coeffs))

    def __divmod__(self, other):
        """Division by a divisor whose X-leading coefficient is a unit in A."""
        if other.is_zero():
            raise ZeroDivisionError
        lead = other.coeffs[-1]
        if lead.degree != 0:
            raise ValueError("AXPoly division requires a unit leading coefficient")
        inv = FqPoly.constant(self.field, self.field.inv(lead.coeffs[0]))
        rem = list(self.coeffs)
        db = other.degree
        quo = [FqPoly.zero(self.field)] * max(len(rem) - db, 0)
        while len(rem) - 1 >= db:
            if rem[-1].is_zero():
                rem.pop()
                continue
            c = rem[-1] * inv
            shift = len(rem) - 1 - db
            quo[shift] = c
            for i, bi in enumerate(other.coeffs):
                rem[shift + i] = rem[shift + i] - c * bi
            rem.pop()
        return AXPoly(self.field, quo), AXPoly(self.field, rem)

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def derivative_x(self):
        F = self.field
        out = []
        for i in range(1, len(self.coeffs)):
            c = FqPoly.zero(F)
            for _ in range(i % F.p):
                c = c + self.coeffs[i]
            out.append(c)
        return AXPoly(F, out)

    def evaluate_theta(self, theta0, ring_mul, ring_add, zero, embed):
        """Coefficients A -> R via theta -> theta0; returns list in R (Horner).

        embed maps packed F_q scalars into R.
        """
        out = []
        for c in self.coeffs:
            acc = zero
            for ci in reversed(c.coeffs):
                acc = ring_add(ring_mul(acc, theta0), embed(ci))
            out.append(acc)
        return out

    def __eq__(self, other):
        return isinstance(other, AXPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        if self.is_zero():
            return "0"
        return " + ".join(f"({c!r})*X^{i}" for i, c in enumerate(self.coeffs) if not c.is_zero())

    def to_grid(self):
        """Coefficient grid: list over X-degree of theta-coefficient lists."""
        return [list(c.coeffs) for c in self.coeffs]


# ---------------------------------------------------------------------------
# the Carlitz module
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _rho_theta_power(field: FqField, i: int) -> TwistedPoly:
    if i == 0:
        return TwistedPoly.one(field)
    c_theta = TwistedPoly(field, (FqPoly.gen(field), FqPoly.one(field)))
    return _rho_theta_power(field, i - 1) * c_theta


def rho(x: FqPoly) -> TwistedPoly:
    """The Carlitz module map: F_q-algebra morphism with rho(theta) = theta + tau."""
    F = x.field
    acc = TwistedPoly.zero(F)
    for i, c in enumerate(x.coeffs):
        if c:
            acc = acc + _rho_theta_power(F, i).scale(FqPoly.constant(F, c))
    return acc


def rho_as_additive_poly(x: FqPoly) -> AXPoly:
    """rho(x) as the F_q-linear polynomial sum a_i X^(q^i)."""
    return rho(x).to_additive()


@dataclass(frozen=True)
class CyclotomicPoly:
    """The primitive-torsion polynomial of conductor m: roots are the
    generators of the m-torsion module."""

    m: FqPoly
    phi: AXPoly

    def to_json(self):
        return {
            "conductor": self.m.serialize(),
            "grid": [[int(v) for v in row] for row in self.phi.to_grid()],
            "q": f"{self.m.field.p}^{self.m.field.e}",
        }


def _divisors_with_mobius(m: FqPoly):
    """Yields (d, mu(m/d)) over monic divisors d with m/d squarefree."""
    fac = factor(m)
    places = [g for g, _ in fac]
    mults = [e for _, e in fac]
    for drop in itertools.product((0, 1), repeat=len(places)):
        d = FqPoly.one(m.field)
        for g, e, dr in zip(places, mults, drop):
            d = d * g ** (e - dr)
        yield d, (-1) ** sum(drop)


def cyclotomic_poly(m: FqPoly) -> CyclotomicPoly:
    """phi_m(X) = prod_{d | m} rho_d(X)^{mu(m/d)}, by exact division in A[X].

    deg_X phi_m = Phi(m) = |(A/m)^x|; phi_m divides rho_m(X).
    """
    if not m.is_monic() or m.degree < 1:
        raise NonMonicError("conductor must be monic of degree >= 1")
    num = AXPoly.one(m.field)
    den = AXPoly.one(m.field)
    for d, mu in _divisors_with_mobius(m):
        part = rho_as_additive_poly(d)
        if mu == 1:
            num = num * part
        else:
            den = den * part
    quo, rem = divmod(num, den)
    if not rem.is_zero():
        raise ArithmeticError("cyclotomic division left a remainder")
    expected = ResidueRing(m).unit_count()
    if quo.degree != expected:
        raise ArithmeticError(f"cyclotomic degree {quo.degree} != Phi(m) = {expected}")
    return CyclotomicPoly(m, quo)


class TorsionModel:
    """The m-torsion of the Carlitz module, abstractly A/m, free of rank 1.

    The class of x acts through multiplication by x, matching the Galois
    action sigma_x(lambda) = rho_x(lambda) on a fixed generator lambda <-> 1.
    """

    def __init__(self, m: FqPoly):
        self.m = m
        self.ring = ResidueRing(m)

    def generator(self) -> FqPoly:
        return FqPoly.one(self.m.field)

    def module_action(self, a: FqPoly, z: FqPoly) -> FqPoly:
        return self.ring.mul(a, z)

    def galois_action(self, x: FqPoly, z: FqPoly) -> FqPoly:
        if not self.ring.is_unit(x):
            raise ValueError("Galois action requires x coprime to the conductor")
        return self.ring.mul(x, z)


# ---------------------------------------------------------------------------
# real subfield generator
# ---------------------------------------------------------------------------


class FactorExtractionError(ArithmeticError):
    """The minimal polynomial does not have the predicted degree."""


class _Frac:
    """Rational functions over A, normalized with monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num: FqPoly, den: FqPoly = None):
        F = num.field
        if den is None:
            den = FqPoly.one(F)
        if den.is_zero():
            raise ZeroDivisionError
        g = num.gcd(den)
        if not g.is_zero() and g.degree >= 1:
            num, den = num // g, den // g
        if not den.is_monic():
            c = F.inv(den.leading())
            num, den = num.scale(c), den.scale(c)
        self.num, self.den = num, den

    def __add__(self, o):
        return _Frac(self.num * o.den + o.num * self.den, self.den * o.den)

    def __sub__(self, o):
        return _Frac(self.num * o.den - o.num * self.den, self.den * o.den)

    def __mul__(self, o):
        return _Frac(self.num * o.num, self.den * o.den)

    def __truediv__(self, o):
        if o.num.is_zero():
            raise ZeroDivisionError
        return _Frac(self.num * o.den, self.den * o.num)

    def is_zero(self):
        return self.num.is_zero()

    def __eq__(self, o):
        return self.num == o.num and self.den == o.den


def _solve_frac(matrix, rhs):
    """Gaussian elimination over Frac(A); returns solution list or None."""
    rows = len(matrix)
    cols = len(matrix[0]) if rows else 0
    m = [row[:] + [r] for row, r in zip(matrix, rhs)]
    piv_cols = []
    r = 0
    for c in range(cols):
        sel = None
        for i in range(r, rows):
            if not m[i][c].is_zero():
                sel = i
                break
        if sel is None:
            continue
        m[r], m[sel] = m[sel], m[r]
        inv = m[r][c]
        m[r] = [x / inv for x in m[r]]
        for i in range(rows):
            if i != r and not m[i][c].is_zero():
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        piv_cols.append(c)
        r += 1
        if r == rows:
            break
    # consistency
    for i in range(r, rows):
        if not m[i][cols].is_zero():
            return None
    sol = [None] * cols
    for row_idx, c in enumerate(piv_cols):
        sol[c] = m[row_idx][cols]
    zero = _Frac(FqPoly.zero(matrix[0][0].num.field)) if rows else None
    return [s if s is not None else zero for s in sol]


def real_generator_minpoly(m: FqPoly) -> AXPoly:
    """Minimal polynomial over k of e = lambda^(q-1), lambda a root of
    cyclotomic_poly(m).  Degree Phi(m)/(q-1); for q = 2 this is
    cyclotomic_poly(m).phi itself (the real field is the full cyclotomic
    field).
    """
    F = m.field
    cyc = cyclotomic_poly(m)
    if F.q == 2:
        return cyc.phi
    phi = cyc.phi
    n = phi.degree
    expected = n // (F.q - 1)

    # Krylov sequence of e = Y^(q-1) inside A[Y]/(phi); phi is monic so the
    # iterates stay integral
    e = AXPoly(F, [FqPoly.zero(F)] * (F.q - 1) + [FqPoly.one(F)]) % phi
    powers = [AXPoly.one(F)]
    for _ in range(expected):
        powers.append((powers[-1] * e) % phi)

    def to_vec(ax):
        return [ _Frac(ax[i]) for i in range(n) ]

    # minimality: no dependence below the predicted degree
    for d in range(1, expected + 1):
        cols = [to_vec(powers[j]) for j in range(d)]
        matrix = [[cols[j][i] for j in range(d)] for i in range(n)]
        rhs = [_Frac(-powers[d][i]) for i in range(n)]
        sol = _solve_frac(matrix, rhs)
        if sol is None:
            continue
        if d != expected:
            raise FactorExtractionError(
                f"generator satisfies a degree-{d} relation; expected {expected}")
        coeffs = []
        for s in sol:
            if s.den.degree != 0:
                raise FactorExtractionError("minimal polynomial is not integral")
            coeffs.append(s.num.scale(F.inv(s.den.coeffs[0])))
        coeffs.append(FqPoly.one(F))
        return AXPoly(F, coeffs)
    raise FactorExtractionError("no minimal polynomial found up to the predicted degree")

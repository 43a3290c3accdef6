"""Independent geometric oracle: brute-force point counts on explicit curve
models, splitting-law counts from class-field data, zeta numerators via
Newton identities, and the Ritter-Weiss order bookkeeping.

Exceptional fibers (above S and infinity) always come from the class-field
tables, never from singular plane-model fibers; the discriminant of the
model is factored once and its support must lie inside the exceptional set.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .carlitz import AXPoly, cyclotomic_poly, real_generator_minpoly
from .ffpoly import FqPoly, INFINITY, is_infinite, factor, irreducibles_of_degree
from .grouprings import ThetaPoly, TruncPolyRing, ZpkRing, characters, is_unit
from .lfun import _finite_s, _infinity_in_s, _layer_field, _layer_sigma

DEFAULT_POINT_BUDGET = 10 ** 7


class CurveModelError(ArithmeticError):
    """The plane model is singular outside the exceptional table."""


class FiberMismatchError(ArithmeticError):
    """An affine fiber above a ramified place disagrees with the table."""


class ConfigurationRefused(ValueError):
    """The bookkeeping case required by the operation does not hold."""


# ---------------------------------------------------------------------------
# curve models
# ---------------------------------------------------------------------------


def _poly_det_bareiss(mat):
    """Fraction-free determinant of a matrix of FqPoly (exact division)."""
    n = len(mat)
    if n == 0:
        raise ValueError("empty matrix")
    F = None
    for row in mat:
        for e in row:
            F = e.field
            break
        break
    m = [row[:] for row in mat]
    sign = 1
    prev = FqPoly.one(F)
    for t in range(n - 1):
        if m[t][t].is_zero():
            swap = next((i for i in range(t + 1, n) if not m[i][t].is_zero()), None)
            if swap is None:
                return FqPoly.zero(F)
            m[t], m[swap] = m[swap], m[t]
            sign = -sign
        for i in range(t + 1, n):
            for j in range(t + 1, n):
                num = m[i][j] * m[t][t] - m[i][t] * m[t][j]
                quo, rem = divmod(num, prev)
                if not rem.is_zero():
                    raise ArithmeticError("Bareiss division failed")
                m[i][j] = quo
            m[i][t] = FqPoly.zero(F)
        prev = m[t][t]
    det = m[n - 1][n - 1]
    return det if sign == 1 else -det


def _resultant_x(a: AXPoly, b: AXPoly) -> FqPoly:
    """Res_X(a, b) over A via the Sylvester determinant."""
    F = a.field
    da, db = a.degree, b.degree
    if da < 0 or db < 0:
        return FqPoly.zero(F)
    n = da + db
    rows = []
    for i in range(db):
        row = [FqPoly.zero(F)] * n
        for j in range(da + 1):
            row[i + j] = a[da - j]
        rows.append(row)
    for i in range(da):
        row = [FqPoly.zero(F)] * n
        for j in range(db + 1):
            row[i + j] = b[db - j]
        rows.append(row)
    return _poly_det_bareiss(rows)


@dataclass
class CurveModel:
    """Affine plane model F(theta, X) = 0 of a tower layer, with the
    class-field exceptional table."""

    layer: object
    fpoly: AXPoly
    exceptional: dict   # place -> [(deg_w, count)]
    disc: FqPoly

    @property
    def field(self):
        return _layer_field(self.layer)


def curve_model(layer) -> CurveModel:
    """Plane model from the real-subfield generator (cyclotomic polynomial
    itself when q = 2).  Hard error if the model is singular away from the
    exceptional fibers."""
    cfg = layer.cfg
    if cfg is None:
        # the trivial layer: the projective line, model X = 0
        fpoly = AXPoly.gen(_layer_field(layer))
        return CurveModel(layer=layer, fpoly=fpoly,
                          exceptional=layer.exceptional_table(),
                          disc=FqPoly.one(_layer_field(layer)))
    F = cfg.field
    m = layer.modulus
    fpoly = real_generator_minpoly(m)
    if fpoly.degree != layer.order:
        raise CurveModelError(
            f"model degree {fpoly.degree} does not match the layer order {layer.order}")
    table = layer.exceptional_table()
    disc = _resultant_x(fpoly, fpoly.derivative_x())
    if disc.is_zero():
        raise CurveModelError("inseparable plane model")
    allowed = {v.gen for v in _finite_s(layer)}
    for g, _ in factor(disc.monic()) if disc.degree >= 1 else []:
        if g not in allowed:
            raise CurveModelError(f"model singular above {g!r}, outside the exceptional table")
    return CurveModel(layer=layer, fpoly=fpoly, exceptional=table, disc=disc)


# -- extension field arithmetic on coefficient tuples ------------------------


def _ext_ops(field, i: int):
    """Arithmetic closures for F_(q^i) = F_q[Y]/(g), elements as i-tuples."""
    g = next(irreducibles_of_degree(field, i)).gen
    gc = g.coeffs
    q = field.q
    fadd, fmul, fneg = field.add, field.mul, field.neg
    zero = (0,) * i
    one = (1,) + (0,) * (i - 1)

    # reduction of Y^j for i <= j <= 2i-2
    red = {}
    base = tuple(fneg(c) for c in gc[:i])
    red[i] = base
    for j in range(i + 1, 2 * i - 1):
        prev = red[j - 1]
        shifted = (0,) + prev[:-1]
        top = prev[-1]
        red[j] = tuple(fadd(s, fmul(top, b)) for s, b in zip(shifted, base))

    def add(a, b):
        return tuple(fadd(x, y) for x, y in zip(a, b))

    def neg(a):
        return tuple(fneg(x) for x in a)

    def mul(a, b):
        out = [0] * (2 * i - 1)
        for s, x in enumerate(a):
            if x:
                for t, y in enumerate(b):
                    if y:
                        out[s + t] = fadd(out[s + t], fmul(x, y))
        for j in range(2 * i - 2, i - 1, -1):
            c = out[j]
            if c:
                for t, r in enumerate(red[j]):
                    out[t] = fadd(out[t], fmul(c, r))
            out[j] = 0
        return tuple(out[:i])

    def embed(c):
        return (c,) + (0,) * (i - 1)

    def power(a, n):
        r = one
        while n:
            if n & 1:
                r = mul(r, a)
            a = mul(a, a)
            n >>= 1
        return r

    def elements():
        import itertools as it
        return it.product(range(q), repeat=i)

    return {"add": add, "neg": neg, "mul": mul, "embed": embed, "pow": power,
            "zero": zero, "one": one, "elements": elements, "degree": i}


def _fiber_root_count(coeffs, ops, qi_exp, q):
    """Number of roots in F_(q^i) of the monic polynomial with the given
    extension-field coefficients: deg gcd(X^(q^i) - X, f).

    X^(q^i) mod f is computed by iterating the q-power Frobenius
    substitution h -> sum_t h_t^q (X^q)^t, which keeps every intermediate at
    degree < deg f.
    """
    add, mul, neg = ops["add"], ops["mul"], ops["neg"]
    zero, one = ops["zero"], ops["one"]

    def poly_trim(f):
        while f and f[-1] == zero:
            f.pop()
        return f

    def poly_mul(a, b):
        out = [zero] * (len(a) + len(b) - 1)
        for s, x in enumerate(a):
            if x != zero:
                for t, y in enumerate(b):
                    if y != zero:
                        out[s + t] = add(out[s + t], mul(x, y))
        return out

    def poly_rem(a, b):
        # b monic
        a = list(a)
        db = len(b) - 1
        while len(a) - 1 >= db:
            if a[-1] == zero:
                a.pop()
                continue
            c = a[-1]
            shift = len(a) - 1 - db
            for t in range(db):
                a[shift + t] = add(a[shift + t], neg(mul(c, b[t])))
            a.pop()
        return poly_trim(a)

    def poly_monic(f):
        lead = f[-1]
        if lead == one:
            return f
        inv = ops["pow"](lead, q ** ops["degree"] - 2)
        return [mul(inv, c) for c in f]

    def poly_gcd(a, b):
        # poly_rem needs monic divisors: normalize b throughout
        a, b = poly_trim(list(a)), poly_trim(list(b))
        if b:
            b = poly_monic(b)
        while b:
            a = poly_rem(a, b)
            a, b = b, poly_trim(a)
            if b:
                b = poly_monic(b)
        return a

    f = list(coeffs)
    d = len(f) - 1
    if d == 0:
        return 0
    # x^q mod f by square-and-multiply
    acc = [one]
    base = [zero, one]
    e = q
    while e:
        if e & 1:
            acc = poly_rem(poly_mul(acc, base), f) or [zero]
        base = poly_rem(poly_mul(base, base), f) or [zero]
        e >>= 1
    xq_mod = acc
    # powers (x^q)^t mod f for t < d
    pw = [[one]]
    for _ in range(d - 1):
        pw.append(poly_rem(poly_mul(pw[-1], xq_mod), f) or [zero])
    h = poly_rem([zero, one], f) or [zero]
    for _ in range(qi_exp):
        new = [zero]
        for t, c in enumerate(h):
            if c == zero:
                continue
            cq = ops["pow"](c, q)
            addend = [mul(cq, x) for x in pw[t]]
            if len(addend) > len(new):
                new, addend = addend, new
            new = [add(a, b) for a, b in
                   zip(new, addend + [zero] * (len(new) - len(addend)))]
        h = poly_trim(new) or [zero]
    diff = list(h) + [zero] * max(0, 2 - len(h))
    diff[1] = add(diff[1], neg(one))
    g = poly_gcd(f, diff)
    return len(g) - 1 if g else 0


def count_points_model(model: CurveModel, i: int,
                       budget: int = DEFAULT_POINT_BUDGET, threads: int = 1) -> int:
    """F_(q^i)-points of the smooth model: affine counting away from the
    exceptional fibers plus the class-field table above them.

    The affine fiber above each exceptional finite place is also counted and
    compared against the table; disagreement is a hard error.
    """
    field = model.field
    q = field.q
    if q ** i > budget:
        raise ValueError(f"q^i = {q ** i} exceeds the point-count budget {budget}")
    ops = _ext_ops(field, i)
    # X-coefficients of the model as A-polynomials, evaluated per fiber
    xcoeffs = model.fpoly.coeffs
    exc_polys = [v.gen for v in _finite_s(model.layer)]

    def fiber_contribution(theta0):
        # returns (affine_count, exceptional_index or None)
        for idx, g in enumerate(exc_polys):
            val = ops["zero"]
            for c in reversed(g.coeffs):
                val = ops["add"](ops["mul"](val, theta0), ops["embed"](c))
            if val == ops["zero"]:
                # exceptional fiber: count it separately for the mismatch check
                coeffs = [_eval_coeff(c, theta0, ops) for c in xcoeffs]
                return _fiber_root_count(coeffs, ops, i, q), idx
        coeffs = [_eval_coeff(c, theta0, ops) for c in xcoeffs]
        return _fiber_root_count(coeffs, ops, i, q), None

    def _eval_coeff(c: FqPoly, theta0, ops):
        val = ops["zero"]
        for cc in reversed(c.coeffs):
            val = ops["add"](ops["mul"](val, theta0), ops["embed"](cc))
        return val

    points = 0
    exceptional_affine = {}
    thetas = list(ops["elements"]())
    if threads > 1:
        def work(chunk):
            total = 0
            exc = {}
            for th in chunk:
                cnt, idx = fiber_contribution(th)
                if idx is None:
                    total += cnt
                else:
                    exc[idx] = exc.get(idx, 0) + cnt
            return total, exc
        size = max(1, len(thetas) // threads)
        chunks = [thetas[j:j + size] for j in range(0, len(thetas), size)]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            for total, exc in pool.map(work, chunks):
                points += total
                for idx, c in exc.items():
                    exceptional_affine[idx] = exceptional_affine.get(idx, 0) + c
    else:
        for th in thetas:
            cnt, idx = fiber_contribution(th)
            if idx is None:
                points += cnt
            else:
                exceptional_affine[idx] = exceptional_affine.get(idx, 0) + cnt

    # add table contributions and enforce the fiber-consistency check
    finite_places = _finite_s(model.layer)
    for idx, v in enumerate(finite_places):
        expected = sum(dw * cnt for dw, cnt in model.exceptional[v] if i % dw == 0)
        affine = exceptional_affine.get(idx, 0)
        if v.degree <= i and i % v.degree == 0 and affine != expected:
            raise FiberMismatchError(
                f"fiber above {v!r}: affine count {affine} != table count {expected}")
        points += expected
    for dw, cnt in model.exceptional[INFINITY]:
        if i % dw == 0:
            points += dw * cnt
    return points


def count_points_splitting(layer, i: int) -> int:
    """N_i from the splitting law: unramified places contribute through the
    order of their Frobenius, ramified ones through the class-field table."""
    field = _layer_field(layer)
    table = layer.exceptional_table()
    total = 0
    for v, entries in table.items():
        for dw, cnt in entries:
            if i % dw == 0:
                total += dw * cnt
    s_gens = {v.gen for v in _finite_s(layer)}
    for d in range(1, i + 1):
        if i % d:
            continue
        for pl in irreducibles_of_degree(field, d):
            if pl.gen in s_gens:
                continue
            f = layer.group.element_order(layer.frobenius(pl))
            if i % (d * f) == 0:
                # |G|/f places of degree d*f, each contributing d*f points
                total += d * layer.order
    return total


# ---------------------------------------------------------------------------
# zeta numerators
# ---------------------------------------------------------------------------


@dataclass
class ZetaData:
    counts: list
    genus: int
    numerator: list  # integer coefficients c_0 .. c_{2g}
    h: int

    def to_json(self):
        return {"counts": list(self.counts), "genus": self.genus,
                "numerator": list(self.numerator), "h": self.h}


def zeta_numerator(counts, q: int) -> ZetaData:
    """P_J from N_1..N_m by Newton identities; genus inferred as the smallest
    g such that a degree-2g numerator with the functional equation fits."""
    m = len(counts)
    s = [None] + [q ** i + 1 - counts[i - 1] for i in range(1, m + 1)]
    c = [Fraction(1)]
    for n in range(1, m + 1):
        acc = Fraction(0)
        for i in range(1, n + 1):
            acc += s[i] * c[n - i]
        c.append(-acc / n)
    for g in range(0, m // 2 + 1):
        if any(c[j] != 0 for j in range(2 * g + 1, m + 1)):
            continue
        cand = c[: 2 * g + 1]
        if any(x.denominator != 1 for x in cand):
            continue
        cand = [int(x) for x in cand]
        # functional equation P(u) = q^g u^(2g) P(1/(qu))
        if any(cand[2 * g - j] != q ** (g - j) * cand[j] for j in range(0, 2 * g + 1)):
            continue
        # Weil bounds, exactly: (N_i - q^i - 1)^2 <= 4 g^2 q^i
        if any(s[idx] ** 2 > 4 * g * g * q ** idx for idx in range(1, m + 1)):
            continue
        h = sum(cand)
        if h <= 0:
            continue
        return ZetaData(counts=list(counts), genus=g, numerator=cand, h=h)
    raise ArithmeticError("no integral zeta numerator fits the counts")


# ---------------------------------------------------------------------------
# S-divisor bookkeeping and the Ritter-Weiss order
# ---------------------------------------------------------------------------


@dataclass
class SDivisorData:
    places: dict        # place of k -> [(deg_w, count)]
    degrees: list       # degrees of all places of L_n above S, with multiplicity
    d_s: int            # gcd of the degrees: deg(Div_S(L_n)) = d_s Z
    x_rank: int         # rank of X_S = (number of places above S) - 1
    zp_mod_ds_exponent: int  # v_p(d_s) = log_p |Z_p / d_S|

    def to_json(self):
        return {"degrees": self.degrees, "d_s": self.d_s, "x_rank": self.x_rank,
                "zp_mod_ds_exponent": self.zp_mod_ds_exponent}


def s_divisor_data(layer) -> SDivisorData:
    from math import gcd

    table = layer.exceptional_table()
    places = {}
    degrees = []
    for v in sorted(_finite_s(layer), key=lambda v: v.gen.sort_key()):
        places[v] = table[v]
        for dw, cnt in table[v]:
            degrees.extend([dw] * cnt)
    if _infinity_in_s(layer):
        places[INFINITY] = table[INFINITY]
        for dw, cnt in table[INFINITY]:
            degrees.extend([dw] * cnt)
    d_s = 0
    for d in degrees:
        d_s = gcd(d_s, d)
    p = _layer_field(layer).p
    v_p, t = 0, d_s
    while t and t % p == 0:
        t //= p
        v_p += 1
    return SDivisorData(places=places, degrees=degrees, d_s=d_s,
                        x_rank=len(degrees) - 1, zp_mod_ds_exponent=v_p)


@dataclass
class NablaOrder:
    hypotheses: dict            # which of (a)-(d) hold
    total_p_exponent: int       # log_p |nabla_S^(n)| (p-part)
    h_p_exponent: int           # v_p(h)
    ds_p_exponent: int          # v_p(d_S)
    per_char_exponents: dict    # chi exps -> exponent or None
    finite_chars: list          # chi exps with chi nontrivial on every G_v
    infinite_chars: list
    sharp_total_exponent: object  # int when determined, else None

    def to_json(self):
        return {"hypotheses": self.hypotheses,
                "total_p_exponent": self.total_p_exponent,
                "h_p_exponent": self.h_p_exponent,
                "ds_p_exponent": self.ds_p_exponent,
                "sharp_total_exponent": self.sharp_total_exponent}


def evaluate_hypotheses(layer) -> dict:
    """Hypotheses (a)-(d) for the class-group comparison, over rational k:
    (b) and (c) are automatic since the real Hilbert class field is k itself
    (h_k = 1, d_infty = 1)."""
    cfg = layer.cfg
    finite_only = not _infinity_in_s(layer)
    return {
        "a_f_trivial_and_S_is_p": cfg.f.is_one() and finite_only and
        set(_finite_s(layer)) == {cfg.p_place},
        "b_p_inert_in_hilbert": True,
        "c_p_coprime_hilbert_degree": True,
        "d_p_coprime_deg_p": cfg.p_place.degree % cfg.char != 0,
    }


def nabla_order(layer, zeta: ZetaData, sdiv: SDivisorData) -> NablaOrder:
    """p-part order of nabla_S^(n) from the appendix exact sequences.

    Supported case: a single place above p (hypotheses (a)-(b)), where
    Div^0_S = 0, X_S = 0, Pic^0_S = Pic^0 and the order is the p-part of h
    times |Z_p/d_S| (the latter trivial exactly under hypothesis (d)).
    """
    hyp = evaluate_hypotheses(layer)
    if not hyp["a_f_trivial_and_S_is_p"]:
        raise ConfigurationRefused(
            "nabla bookkeeping requires hypothesis (a): f = (1) and S = {p}")
    if sdiv.x_rank != 0:
        raise ConfigurationRefused("nabla bookkeeping requires a single place above p")
    p = _layer_field(layer).p
    h = zeta.h
    v_h = 0
    while h % p == 0:
        h //= p
        v_h += 1
    total = v_h + sdiv.zp_mod_ds_exponent
    chars = characters(layer.group)
    finite, infinite = [], []
    for chi in chars:
        ok = True
        for v in layer.cfg.S:
            if chi.trivial_on(layer.decomposition_group(v)):
                ok = False
                break
        (finite if ok else infinite).append(chi.exps)
    per_char = {}
    if v_h == 0:
        # the only contribution is Z_p/d_S with trivial G-action: it lives
        # entirely in the trivial-character component
        for chi in chars:
            per_char[chi.exps] = sdiv.zp_mod_ds_exponent if chi.is_trivial() else 0
        sharp_total = 0  # (Z_p/d_S)^sharp = 0
    else:
        for chi in chars:
            per_char[chi.exps] = None
        sharp_total = None
    return NablaOrder(hypotheses=hyp, total_p_exponent=total, h_p_exponent=v_h,
                      ds_p_exponent=sdiv.zp_mod_ds_exponent,
                      per_char_exponents=per_char, finite_chars=finite,
                      infinite_chars=infinite, sharp_total_exponent=sharp_total)


# ---------------------------------------------------------------------------
# the Frobenius characteristic polynomial on T_p(M_S)
# ---------------------------------------------------------------------------


def tate_charpoly(layer, zeta: ZetaData, sdiv: SDivisorData):
    """det(1 - gamma^{-1} u | T_p(M_S)) = P_J(u) * prod_w (1 - u^{d_w})/(1-u),
    as an integer polynomial in u."""
    inf_entries = layer.exceptional_table()[INFINITY]
    if min(dw for dw, _ in inf_entries) != 1:
        raise ConfigurationRefused("constant-field extension detected; unsupported")
    poly = list(zeta.numerator)
    for dw in sdiv.degrees:
        f = [0] * (dw + 1)
        f[0], f[dw] = 1, -1
        out = [0] * (len(poly) + dw)
        for a_i, a in enumerate(poly):
            for b_i, b in enumerate(f):
                out[a_i + b_i] += a * b
        poly = out
    # exact division by (1 - u)
    quo = []
    acc = 0
    for c in poly[:-1]:
        acc += c
        quo.append(acc)
    if sum(poly) != 0:
        raise ArithmeticError("charpoly division by (1-u) inexact")
    while quo and quo[-1] == 0:
        quo.pop()
    return quo


def sigma_factor_poly(layer) -> ThetaPoly:
    """prod_{v in Sigma} (1 - sigma_v^{-1} (qu)^{d_v}) in Z[G][u]."""
    from .grouprings import GroupRingElem

    group = layer.group
    q = _layer_field(layer).q
    acc = ThetaPoly(group, [GroupRingElem.one(group)])
    for v in sorted(_layer_sigma(layer), key=lambda v: v.gen.sort_key()):
        sigma_inv = group.inv(layer.frobenius(v))
        coeffs = [GroupRingElem.one(group)]
        coeffs.extend(GroupRingElem.zero(group) for _ in range(v.degree - 1))
        coeffs.append(GroupRingElem(group, {sigma_inv: -(q ** v.degree)}))
        acc = acc * ThetaPoly(group, coeffs)
    return acc


def charpoly_theta_report(layer, theta_result, zeta: ZetaData, sdiv: SDivisorData,
                          k: int = 12, M: int = 12) -> dict:
    """Per-character comparison of the charpoly with Theta, at the level of
    group-ring norms.

    Exact identity: N(Theta_{S,Sigma})(u) * (1 - qu) = Q(u) * N(Sigma-factor)(u)
    in Z[u], where N is the product over all characters and Q the charpoly.
    The discrepancy factor W = N(Sigma)/(1-qu) is certified as a unit of
    Z/p^k[u]/(u^M) with an inverse witness.
    """
    field = _layer_field(layer)
    p, q = field.p, field.q
    Q = tate_charpoly(layer, zeta, sdiv)
    R = theta_result.theta.norm_poly()
    NS = sigma_factor_poly(layer).norm_poly()

    def ipoly_mul(a, b):
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                out[i + j] += x * y
        return out

    lhs = ipoly_mul(R, [1, -q])
    rhs = ipoly_mul(Q, NS)
    while lhs and lhs[-1] == 0:
        lhs.pop()
    while rhs and rhs[-1] == 0:
        rhs.pop()
    exact = lhs == rhs

    ring = TruncPolyRing(ZpkRing(p, k), M)
    q_t = ring.from_list([c % ring.pk for c in Q])
    r_t = ring.from_list([c % ring.pk for c in R])
    ok_q, q_inv = is_unit(q_t, ring)
    unit_certified = False
    witness = None
    ratio = None
    if ok_q:
        ratio = ring.mul(r_t, q_inv)
        unit_certified, witness = is_unit(ratio, ring)
        # the pinned discrepancy: N(Sigma)/(1 - qu)
        one_minus_qu = ring.from_list([1, (-q) % ring.pk])
        ok_d, d_inv = is_unit(one_minus_qu, ring)
        pinned = ring.mul(ring.from_list([c % ring.pk for c in NS]), d_inv) if ok_d else None
        pinned_matches = pinned is not None and ring.equal(ratio, pinned)
    else:
        pinned_matches = False
    return {
        "exact_identity": exact,
        "unit_certified": unit_certified,
        "pinned_discrepancy_matches": pinned_matches,
        "precision_k": k,
        "truncation_M": M,
        "charpoly": Q,
        "norm_theta": R,
        "norm_sigma": NS,
        "witness": witness,
    }

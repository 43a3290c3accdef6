"""The equivariant L-polynomial engine.

Theta_{S,Sigma}(u) = prod_{v in Sigma} (1 - sigma_v^{-1} (qu)^{d_v})
                   * prod_{v not in S} (1 - sigma_v^{-1} u^{d_v})^{-1},

the second product over all places of k = F_q(theta) outside S, including
the infinite place (with trivial Frobenius) when it is not in S.  The
product converges coefficientwise: the u^j coefficient only sees places of
degree <= j, so computing with places of degree <= D gives the exact
coefficients through degree D.  Polynomiality is certified empirically: all
coefficients in (bound, D] must vanish.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .abelian import AbelianGroup
from .ffpoly import FqPoly, INFINITY, is_infinite, irreducibles_of_degree
from .grouprings import (
    Character,
    CyclotomicRing,
    GroupRingElem,
    ThetaPoly,
    TruncPolyRing,
    ZpkGroupRing,
    characters,
    invert_one_plus_nilpotent_u,
    is_unit,
)

PER_CHARACTER_PRODUCT_MAX_ORDER = 8
DEFAULT_EXTRA_DEGREE = 4


class StabilizationError(ArithmeticError):
    """A coefficient above the predicted polynomial degree is nonzero."""


class PoleError(ArithmeticError):
    """Sigma fails to cancel a pole of the trivial-character component."""


@dataclass(frozen=True)
class EulerFactor:
    """One local factor of the product defining Theta.

    mode "S-inverse": contributes (1 - sigma^{-1} u^d)^{-1} (a place off S);
    mode "Sigma-forward": contributes (1 - sigma^{-1} (qu)^d) (a smoothing
    place in Sigma).
    """

    place: object
    degree: int
    frobenius: tuple
    mode: str  # "S-inverse" | "Sigma-forward"


def euler_factors(layer, max_degree: int):
    """All Euler factors entering Theta up to the given degree: the inverse
    factors at places off S (including infinity when it is off S), then the
    Sigma smoothing factors."""
    field = _layer_field(layer)
    s_gens = {v.gen for v in _finite_s(layer)}
    out = []
    if not _infinity_in_s(layer):
        out.append(EulerFactor(INFINITY, 1, layer.frobenius(INFINITY), "S-inverse"))
    for d in range(1, max_degree + 1):
        for pl in irreducibles_of_degree(field, d):
            if pl.gen in s_gens:
                continue
            out.append(EulerFactor(pl, d, layer.frobenius(pl), "S-inverse"))
    for v in sorted(_layer_sigma(layer), key=lambda v: v.gen.sort_key()):
        out.append(EulerFactor(v, v.degree, layer.frobenius(v), "Sigma-forward"))
    return out


def _layer_field(layer):
    return layer.cfg.field if layer.cfg is not None else layer.field


def _layer_s(layer):
    return layer.cfg.S if layer.cfg is not None else layer.S


def _layer_sigma(layer):
    return layer.cfg.sigma if layer.cfg is not None else layer.sigma


def _finite_s(layer):
    return sorted((v for v in _layer_s(layer) if not is_infinite(v)),
                  key=lambda v: v.gen.sort_key())


def _infinity_in_s(layer) -> bool:
    return any(is_infinite(v) for v in _layer_s(layer))


def character_conductor(layer, chi: Character):
    """Minimal level m' = f' p^j through which chi factors, by descent over
    the divisors of f p^(n+1).  Returns the monic polynomial m'."""
    if layer.cfg is None:
        return FqPoly.one(_layer_field(layer))
    cfg = layer.cfg
    F = cfg.field
    from .ffpoly import factor as fq_factor

    f_divs = [FqPoly.one(F)]
    if cfg.f.degree >= 1:
        fac = fq_factor(cfg.f)
        f_divs = []
        def expand(i, cur):
            if i == len(fac):
                f_divs.append(cur)
                return
            g, e = fac[i]
            pw = FqPoly.one(F)
            for j in range(e + 1):
                expand(i + 1, cur * pw)
                pw = pw * g
        expand(0, FqPoly.one(F))
    candidates = []
    for fd in f_divs:
        for j in range(layer.n + 2):
            candidates.append(fd * cfg.p_place.gen ** j)
    candidates.sort(key=FqPoly.sort_key)
    for m_prime in candidates:
        if _chi_factors_through(layer, chi, m_prime):
            return m_prime
    raise ArithmeticError("character does not factor through its own level")  # unreachable


def _chi_factors_through(layer, chi: Character, m_prime: FqPoly) -> bool:
    """chi trivial on ker(G_n -> (A/m')^x / F_q^x)."""
    import itertools as it

    F = layer.cfg.field
    m = layer.modulus
    if m_prime.degree == m.degree:
        return True
    rest_deg = m.degree - m_prime.degree
    for c in range(1, F.q):
        cc = FqPoly.constant(F, c)
        for tail in it.product(range(F.q), repeat=rest_deg):
            t = FqPoly(F, tail)
            a = cc + m_prime * t
            if not a.gcd(m).is_one():
                continue
            if chi.log_value(layer.class_of(a)) != 0:
                return False
    return True


def per_character_degree_bound(layer, chi: Character) -> int:
    """Degree bound for chi(Theta): Sigma degrees + deg(cond chi) +
    degrees of finite S-places prime to the conductor - 2 + [infinity in S]."""
    sig = sum(v.degree for v in _layer_sigma(layer))
    m_chi = character_conductor(layer, chi)
    extra = 0
    for v in _finite_s(layer):
        if m_chi.degree < 1 or not (m_chi % v.gen).is_zero():
            extra += v.degree
    return sig + m_chi.degree + extra - 2 + (1 if _infinity_in_s(layer) else 0)


def degree_bound(layer) -> int:
    """Global polynomial degree bound for Theta (max over characters)."""
    sig = sum(v.degree for v in _layer_sigma(layer))
    if layer.cfg is None:
        s_fin = sum(v.degree for v in _finite_s(layer))
        return sig + s_fin - 2 + (1 if _infinity_in_s(layer) else 0)
    mod_deg = layer.modulus.degree
    extra = 0
    for v in _finite_s(layer):
        if not (layer.modulus % v.gen).is_zero():
            extra += v.degree
    return sig + mod_deg + extra - 2 + (1 if _infinity_in_s(layer) else 0)


@dataclass
class ThetaResult:
    layer: object
    D: int
    bound: int
    theta: ThetaPoly
    series: list  # raw truncated series to degree D (list of coeff dicts)
    stabilization_ok: bool
    per_char_degrees: dict
    checks: dict = dc_field(default_factory=dict)

    def special_value(self) -> GroupRingElem:
        return self.theta.evaluate_at_one()

    def to_json(self):
        return {
            "D": self.D,
            "bound": self.bound,
            "stabilization_ok": self.stabilization_ok,
            "theta": self.theta.to_json(),
            "checks": {k: bool(v) for k, v in self.checks.items()},
        }


def _series_mul_inverse_factor(series, group, sigma_inv, d, D):
    # multiply by (1 - sigma^{-1} u^d)^{-1}: ascending prefix accumulation
    for i in range(d, D + 1):
        src = series[i - d]
        if not src:
            continue
        dst = series[i]
        for k, v in src.items():
            kk = group.mul(k, sigma_inv)
            dst[kk] = dst.get(kk, 0) + v
    return series


def _series_mul_forward_factor(series, group, sigma_inv, d, D, scale):
    # multiply by (1 - scale * sigma^{-1} u^d): descending, uses old values
    for i in range(D, d - 1, -1):
        src = series[i - d]
        if not src:
            continue
        dst = series[i]
        for k, v in src.items():
            kk = group.mul(k, sigma_inv)
            dst[kk] = dst.get(kk, 0) - scale * v
    return series


def _clean(series):
    return [{k: v for k, v in layer.items() if v} for layer in series]


def euler_series(layer, D: int):
    """Truncated series for Theta_{S,Sigma} through degree D."""
    group = layer.group
    q = _layer_field(layer).q
    series = [dict() for _ in range(D + 1)]
    series[0][group.identity] = 1
    for fac in euler_factors(layer, D):
        sigma_inv = group.inv(fac.frobenius)
        if fac.mode == "S-inverse":
            _series_mul_inverse_factor(series, group, sigma_inv, fac.degree, D)
        else:
            _series_mul_forward_factor(series, group, sigma_inv, fac.degree, D,
                                       q ** fac.degree)
    return _clean(series)


def divisor_sum_series(layer, D: int):
    """Independent recomputation: sum over effective divisors off S.

    The u^j coefficient of prod_{v not in S} (1 - sigma_v^{-1} u^{d_v})^{-1}
    is sum over effective divisors of degree j supported off S of the inverse
    Artin class; finite parts are monic polynomials coprime to the finite
    S-places, infinite parts contribute trivially when infinity is off S.
    Sigma factors are then multiplied in polynomially.
    """
    import itertools as it

    field = _layer_field(layer)
    group = layer.group
    q = field.q
    s_gens = [v.gen for v in _finite_s(layer)]
    base = [dict() for _ in range(D + 1)]
    for d in range(0, D + 1):
        target = base[d]
        if d == 0:
            target[group.identity] = 1
            continue
        for tail in it.product(range(q), repeat=d):
            a = FqPoly(field, tail + (1,))
            if any((a % g).is_zero() for g in s_gens):
                continue
            k = group.inv(layer.class_of(a) if layer.cfg is not None else ())
            target[k] = target.get(k, 0) + 1
    if not _infinity_in_s(layer):
        # multiply by (1 - u)^{-1} for the (trivial-Frobenius) infinite place
        _series_mul_inverse_factor(base, group, group.identity, 1, D)
    for v in sorted(_layer_sigma(layer), key=lambda v: v.gen.sort_key()):
        sigma = layer.frobenius(v)
        _series_mul_forward_factor(base, group, group.inv(sigma), v.degree, D, q ** v.degree)
    return _clean(base)


def trivial_character_symbolic(layer):
    """chi_0(Theta) as an exact rational-function cancellation in Z[u].

    numerator = prod_Sigma (1 - (qu)^{d_v}) * prod_{v in S} (1 - u^{d_v}),
    denominator = (1 - u)(1 - qu); raises PoleError if division is inexact.
    """
    q = _layer_field(layer).q

    def poly_mul(a, b):
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                out[i + j] += x * y
        return out

    num = [1]
    for v in _layer_sigma(layer):
        f = [0] * (v.degree + 1)
        f[0], f[v.degree] = 1, -(q ** v.degree)
        num = poly_mul(num, f)
    for v in _layer_s(layer):
        d = 1 if is_infinite(v) else v.degree
        f = [0] * (d + 1)
        f[0], f[d] = 1, -1
        num = poly_mul(num, f)
    den = poly_mul([1, -1], [1, -q])
    # exact division num / den
    quo = [0] * (len(num) - len(den) + 1)
    work = list(num)
    for top in range(len(num) - 1, len(den) - 2, -1):
        c = work[top] // den[-1]
        shift = top - (len(den) - 1)
        quo[shift] = c
        for i, dcoef in enumerate(den):
            work[shift + i] -= c * dcoef
    if any(work):
        raise PoleError("Sigma fails to cancel the pole in the trivial-character component")
    while quo and quo[-1] == 0:
        quo.pop()
    return quo


def per_character_euler_product(layer, chi: Character, D: int):
    """chi(Theta) computed directly in the cyclotomic ring (independent path)."""
    ring = chi.ring
    series = [ring.zero] * (D + 1)
    series = [list(c) for c in series]
    series[0] = list(ring.one)
    q = _layer_field(layer).q

    def mul_inverse(zeta, d):
        for i in range(d, D + 1):
            term = ring.mul(tuple(series[i - d]), zeta)
            series[i] = list(ring.add(tuple(series[i]), term))

    def mul_forward(zeta, d, scale):
        for i in range(D, d - 1, -1):
            term = ring.scale(-scale, ring.mul(tuple(series[i - d]), zeta))
            series[i] = list(ring.add(tuple(series[i]), term))

    group = layer.group
    for fac in euler_factors(layer, D):
        zeta = chi.value(group.inv(fac.frobenius))
        if fac.mode == "S-inverse":
            mul_inverse(zeta, fac.degree)
        else:
            mul_forward(zeta, fac.degree, q ** fac.degree)
    out = [tuple(c) for c in series]
    while out and ring.is_zero(out[-1]):
        out.pop()
    return out


def theta(layer, D: int = None, cross_check: bool = True,
          extra_degree: int = DEFAULT_EXTRA_DEGREE) -> ThetaResult:
    """Compute Theta_{S,Sigma}^{(n)}(u) with a stabilization certificate.

    Raises StabilizationError if any coefficient above the degree bound is
    nonzero within the computed window, and PoleError if the trivial
    character component is not polynomial.
    """
    bound = degree_bound(layer)
    if D is None:
        D = bound + extra_degree
    if D < bound:
        raise ValueError(f"enumeration degree {D} is below the bound {bound}")
    series = euler_series(layer, D)
    for i in range(bound + 1, D + 1):
        if series[i]:
            raise StabilizationError(f"nonzero coefficient at degree {i} > bound {bound}")
    group = layer.group
    tp = ThetaPoly(group, [GroupRingElem(group, c) for c in series[: bound + 1]])

    checks = {}
    per_char_degrees = {}
    chars = characters(group)
    for chi in chars:
        coeffs = tp.apply_character(chi)
        dchi = len(coeffs) - 1 if coeffs else -1
        bchi = per_character_degree_bound(layer, chi)
        per_char_degrees[chi.exps] = (dchi, bchi)
        if dchi > bchi:
            raise StabilizationError(
                f"character {chi.exps}: degree {dchi} exceeds its bound {bchi}")

    if cross_check:
        other = divisor_sum_series(layer, D)
        checks["divisor_sum_equal"] = other == series
        if not checks["divisor_sum_equal"]:
            raise ArithmeticError("Euler product and divisor-sum series disagree")
        sym = trivial_character_symbolic(layer)
        triv = [c.augmentation() for c in tp.coeffs]
        while triv and triv[-1] == 0:
            triv.pop()
        checks["trivial_character_symbolic_equal"] = sym == triv
        if not checks["trivial_character_symbolic_equal"]:
            raise ArithmeticError("symbolic trivial-character component disagrees")
        if group.order <= PER_CHARACTER_PRODUCT_MAX_ORDER:
            ok = True
            for chi in chars:
                direct = per_character_euler_product(layer, chi, D)
                via_group = tp.apply_character(chi)
                ok = ok and direct == via_group
            checks["per_character_product_equal"] = ok
            if not ok:
                raise ArithmeticError("per-character Euler product disagrees")

    return ThetaResult(layer=layer, D=D, bound=bound, theta=tp, series=series,
                       stabilization_ok=True, per_char_degrees=per_char_degrees,
                       checks=checks)


def theta_special_value(tr: ThetaResult) -> GroupRingElem:
    """Theta(1) in Z[G_n], exact."""
    return tr.special_value()


def order_of_vanishing_check(layer, tr: ThetaResult, chi: Character):
    """(computed multiplicity of u = 1 in chi(Theta), predicted count).

    predicted = card{v in S : chi trivial on the decomposition group of v};
    the formula only applies to non-trivial characters.
    """
    if chi.is_trivial():
        raise ValueError("the order-of-vanishing formula requires a non-trivial character")
    ring = chi.ring
    coeffs = list(tr.theta.apply_character(chi))
    mult = 0
    while coeffs:
        total = ring.zero
        for c in coeffs:
            total = ring.add(total, c)
        if not ring.is_zero(total):
            break
        # exact division by (1 - u): synthetic: if sum == 0 then
        # p(u) = (1-u) * q(u) with q_i = sum_{j <= i} p_j
        acc = ring.zero
        new = []
        for c in coeffs[:-1]:
            acc = ring.add(acc, c)
            new.append(acc)
        coeffs = new
        mult += 1
    predicted = 0
    for v in _layer_s(layer):
        dec = layer.decomposition_group(v)
        if chi.trivial_on(dec):
            predicted += 1
    return mult, predicted


@dataclass
class SigmaUnitWitness:
    place: object
    precision_k: int
    truncation_M: int
    element: object
    inverse: object
    verified: bool


def sigma_factor_unit(layer, v, k: int, M: int) -> SigmaUnitWitness:
    """Inverse of 1 - sigma_v^{-1} (qu)^{d_v} in Z/p^k[G][u]/(u^M) via the
    geometric series; the product with the original is checked to be 1."""
    if v not in _layer_sigma(layer):
        raise ValueError("v must lie in Sigma")
    field = _layer_field(layer)
    p, q = field.p, field.q
    base = ZpkGroupRing(p, k, layer.group)
    ring = TruncPolyRing(base, M)
    sigma_inv = layer.group.inv(layer.frobenius(v))
    coeffs = [base.one] + [base.zero] * (M - 1)
    if v.degree < M:
        coeffs[v.degree] = base.scale_int(-(q ** v.degree), {sigma_inv: 1})
    x = ring.from_list(coeffs)
    ok, inv = invert_one_plus_nilpotent_u(ring, x)
    if not ok:
        ok, inv = is_unit(x, ring)
    verified = ok and ring.equal(ring.mul(x, inv), ring.one)
    return SigmaUnitWitness(place=v, precision_k=k, truncation_M=M,
                            element=x, inverse=inv, verified=verified)


@dataclass
class FunctorialityReport:
    equal: bool
    first_mismatch_degree: int = None


def functoriality_check(tr_src: ThetaResult, tr_tgt: ThetaResult, layer_map) -> FunctorialityReport:
    """Project Theta at the higher layer coefficientwise and compare exactly."""
    projected = tr_src.theta.project(layer_map.apply, tr_tgt.layer.group)
    target = tr_tgt.theta
    n = max(len(projected.coeffs), len(target.coeffs))
    for i in range(n):
        if projected.coefficient(i) != target.coefficient(i):
            return FunctorialityReport(equal=False, first_mismatch_degree=i)
    return FunctorialityReport(equal=True)

import random

import pytest

from ctower.carlitz import (
    AXPoly,
    FactorExtractionError,
    TorsionModel,
    TwistedPoly,
    cyclotomic_poly,
    real_generator_minpoly,
    rho,
    rho_as_additive_poly,
)
from ctower.ffpoly import FqField, FqPoly, ResidueRing

F2 = FqField(2)
F3 = FqField(3)
F4 = FqField(2, 2)


def poly(field, *coeffs):
    return FqPoly(field, coeffs)


def additive_eval(ax, ring, theta0, x0):
    """Oracle: evaluate an A[X]-polynomial at (theta0, x0) in a residue ring."""
    coeffs = ax.evaluate_theta(theta0, ring.mul, ring.add, FqPoly.zero(ring.field),
                               lambda c: FqPoly.constant(ring.field, c))
    acc = FqPoly.zero(ring.field)
    xpow = FqPoly.one(ring.field)
    for c in coeffs:
        acc = ring.add(acc, ring.mul(c, xpow))
        xpow = ring.mul(xpow, x0)
    return ring.reduce(acc)


class TestTwisted:
    def test_commutation_rule(self):
        # tau * omega = omega^q * tau
        F = F3
        tau = TwistedPoly(F, (FqPoly.zero(F), FqPoly.one(F)))
        omega = TwistedPoly(F, (poly(F, 1, 2),))
        lhs = tau * omega
        assert lhs.coeffs[1] == poly(F, 1, 2).frobenius_spread(1)

    def test_deg_tau_additive(self):
        F = F3
        a, b = rho(poly(F, 0, 1)), rho(poly(F, 1, 0, 1))
        assert (a * b).deg_tau == a.deg_tau + b.deg_tau

    def test_constant_term_morphism(self):
        F = F3
        rng = random.Random(2)
        for _ in range(15):
            x = FqPoly(F, [rng.randrange(3) for _ in range(4)])
            y = FqPoly(F, [rng.randrange(3) for _ in range(4)])
            assert (rho(x) * rho(y)).constant_term() == x * y
            assert (rho(x) + rho(y)).constant_term() == x + y


class TestRho:
    def test_rho_theta(self):
        # C(theta) = theta*tau^0 + tau^1
        got = rho(FqPoly.gen(F3))
        assert got.coeffs == (FqPoly.gen(F3), FqPoly.one(F3))

    def test_rho_one(self):
        assert rho(FqPoly.one(F3)) == TwistedPoly.one(F3)

    def test_rho_theta_squared(self):
        # (theta + tau) o (theta + tau) = theta^2 + (theta^q + theta) tau + tau^2
        F = F3
        got = rho(poly(F, 0, 0, 1))
        assert got.coeffs == (
            poly(F, 0, 0, 1),
            FqPoly.gen(F).frobenius_spread(1) + FqPoly.gen(F),
            FqPoly.one(F),
        )

    def test_ring_homomorphism_random(self):
        rng = random.Random(5)
        for F in (F2, F3, F4):
            for _ in range(12):
                x = FqPoly(F, [rng.randrange(F.q) for _ in range(rng.randrange(1, 6))])
                y = FqPoly(F, [rng.randrange(F.q) for _ in range(rng.randrange(1, 6))])
                assert rho(x * y) == rho(x) * rho(y)
                assert rho(x + y) == rho(x) + rho(y)

    def test_degree_and_constant_term(self):
        rng = random.Random(6)
        for F in (F2, F3):
            for _ in range(10):
                x = FqPoly(F, [rng.randrange(F.q) for _ in range(rng.randrange(1, 7))])
                r = rho(x)
                if x.is_zero():
                    continue
                assert r.deg_tau == x.degree
                assert r.constant_term() == x
                if x.is_monic():
                    assert r.leading().is_one()  # sgn-normalization on monics


class TestAdditivePoly:
    def test_q3_example(self):
        # x = theta^2 + 1, q = 3: (theta^2+1) X + (theta^3+theta) X^3 + X^9
        F = F3
        got = rho_as_additive_poly(poly(F, 1, 0, 1))
        assert got[1] == poly(F, 1, 0, 1)
        assert got[3] == poly(F, 0, 1, 0, 1)
        assert got[9] == FqPoly.one(F)
        assert got.degree == 9
        assert all(got[i].is_zero() for i in range(10) if i not in (1, 3, 9))

    def test_q2_theta(self):
        got = rho_as_additive_poly(FqPoly.gen(F2))
        assert got[1] == FqPoly.gen(F2) and got[2] == FqPoly.one(F2)

    def test_zero(self):
        assert rho_as_additive_poly(FqPoly.zero(F3)).is_zero()

    def test_fq_linearity_in_extension(self):
        # x*(z1+z2) = x*z1 + x*z2 and x*(c z) = c (x*z) for c in F_q,
        # checked in the extension A/g with g irreducible
        F = F3
        ring = ResidueRing(poly(F, 1, 2, 0, 1))
        x = poly(F, 1, 1)
        ax = rho_as_additive_poly(x)
        rng = random.Random(8)
        for _ in range(10):
            z1 = FqPoly(F, [rng.randrange(3) for _ in range(3)])
            z2 = FqPoly(F, [rng.randrange(3) for _ in range(3)])
            s = additive_eval(ax, ring, FqPoly.gen(F), ring.add(z1, z2))
            assert s == ring.add(additive_eval(ax, ring, FqPoly.gen(F), z1),
                                 additive_eval(ax, ring, FqPoly.gen(F), z2))
            c = rng.randrange(1, 3)
            zc = z1.scale(c)
            assert additive_eval(ax, ring, FqPoly.gen(F), zc) == \
                ring.reduce(additive_eval(ax, ring, FqPoly.gen(F), z1).scale(c))

    def test_module_action_is_evaluation(self):
        # rho_{xy} evaluated = rho_x evaluated after rho_y evaluated
        F = F2
        ring = ResidueRing(poly(F, 1, 1, 0, 1))
        x, y = poly(F, 1, 1), poly(F, 0, 1, 1)
        z = poly(F, 0, 1)
        inner = additive_eval(rho_as_additive_poly(y), ring, FqPoly.gen(F), z)
        outer = additive_eval(rho_as_additive_poly(x), ring, FqPoly.gen(F), inner)
        direct = additive_eval(rho_as_additive_poly(x * y), ring, FqPoly.gen(F), z)
        assert outer == direct


class TestCyclotomic:
    def test_prime_linear(self):
        # m = theta: rho_theta(X)/X = theta + X^(q-1)
        for F in (F2, F3, FqField(5)):
            cyc = cyclotomic_poly(FqPoly.gen(F))
            assert cyc.phi.degree == F.q - 1
            assert cyc.phi[0] == FqPoly.gen(F)
            assert cyc.phi[F.q - 1] == FqPoly.one(F)

    def test_prime_conductor(self):
        # m = P prime: phi = rho_P(X)/X of degree q^deg P - 1
        P = poly(F3, 1, 0, 1)
        cyc = cyclotomic_poly(P)
        assert cyc.phi.degree == 3 ** 2 - 1
        quo, rem = divmod(rho_as_additive_poly(P), AXPoly.gen(F3))
        assert rem.is_zero()
        assert cyc.phi == quo

    def test_q3_conductor_theta2_plus_1(self):
        # degree-8 polynomial dividing the additive polynomial after X is removed
        m = poly(F3, 1, 0, 1)
        cyc = cyclotomic_poly(m)
        assert cyc.phi.degree == 8
        quo, rem = divmod(rho_as_additive_poly(m), cyc.phi)
        assert rem.is_zero()

    def test_prime_power_and_composite(self):
        for F, m in [(F3, poly(F3, 1, 0, 1) ** 2),
                     (F2, poly(F2, 0, 1) * poly(F2, 1, 1)),
                     (F2, poly(F2, 1, 1, 1) * poly(F2, 0, 1))]:
            cyc = cyclotomic_poly(m)
            assert cyc.phi.degree == ResidueRing(m).unit_count()
            quo, rem = divmod(rho_as_additive_poly(m), cyc.phi)
            assert rem.is_zero()

    def test_torsion_count_is_separable_of_full_degree(self):
        # derivative of rho_m(X) is the constant m != 0: separable, so the
        # root count in a splitting field equals the degree q^deg m
        m = poly(F3, 2, 1, 1)
        ax = rho_as_additive_poly(m)
        der = ax.derivative_x()
        assert der.degree == 0 and der[0] == m
        assert ax.degree == 3 ** m.degree

    def test_json(self):
        cyc = cyclotomic_poly(poly(F3, 1, 0, 1))
        blob = cyc.to_json()
        assert blob["conductor"] == "[1,0,1]@q=3^1"
        assert len(blob["grid"]) == 9


class TestTorsionModel:
    def test_free_rank_one(self):
        tm = TorsionModel(poly(F3, 1, 0, 1))
        g = tm.generator()
        seen = {tm.module_action(a, g).coeffs for a in tm.ring.elements()}
        assert len(seen) == tm.ring.size

    def test_galois_action_requires_coprime(self):
        tm = TorsionModel(poly(F3, 0, 1))
        with pytest.raises(ValueError):
            tm.galois_action(FqPoly.gen(F3), tm.generator())

    def test_galois_action_multiplicative(self):
        tm = TorsionModel(poly(F3, 1, 0, 1))
        x, y = poly(F3, 1, 1), poly(F3, 2, 1)
        z = tm.generator()
        assert tm.galois_action(x, tm.galois_action(y, z)) == tm.galois_action(tm.ring.mul(x, y), z)


class TestRealGenerator:
    def test_q3_theta_is_degree_one(self):
        # Phi(theta)/(q-1) = 1: real field is k itself
        got = real_generator_minpoly(FqPoly.gen(F3))
        assert got.degree == 1

    def test_q3_flagship_quartic(self):
        # q=3, m=theta^2+1: degree 8/2 = 4; the cyclotomic polynomial is a
        # polynomial in X^2, so the minpoly of e = lambda^2 can be read off
        # as the independent oracle: Y^4 + (theta^3+theta) Y + (theta^2+1)
        m = poly(F3, 1, 0, 1)
        got = real_generator_minpoly(m)
        assert got.degree == 4
        assert got[4] == FqPoly.one(F3)
        assert got[1] == poly(F3, 0, 1, 0, 1)
        assert got[0] == poly(F3, 1, 0, 1)
        assert got[2].is_zero() and got[3].is_zero()

    def test_q2_returns_cyclotomic(self):
        m = poly(F2, 1, 1, 1)
        got = real_generator_minpoly(m)
        cyc = cyclotomic_poly(m)
        assert got == cyc.phi
        assert got.degree == 3

    def test_substituted_generator_vanishes(self):
        # the returned minpoly annihilates e = Y^(q-1) mod phi_m
        F = F3
        m = poly(F, 1, 0, 1)
        phi = cyclotomic_poly(m).phi
        mp = real_generator_minpoly(m)
        e = AXPoly(F, [FqPoly.zero(F)] * 2 + [FqPoly.one(F)]) % phi
        acc = AXPoly.zero(F)
        epow = AXPoly.one(F)
        for c in mp.coeffs:
            acc = (acc + epow.scale(c)) % phi
            epow = (epow * e) % phi
        assert acc.is_zero()

    def test_q3_second_conductor(self):
        # m = theta^2 + theta + 2 is irreducible over F_3: degree (9-1)/2 = 4
        m = poly(F3, 2, 1, 1)
        got = real_generator_minpoly(m)
        assert got.degree == 4

import itertools
import math
import random

from ctower.snf import (
    hensel_lift_factors,
    smith_normal_form,
    snf_diagonal,
    zpk_cokernel_exponents,
    zpk_kernel,
    zpk_module_order_exponent,
    zpk_smith,
    zpk_solve,
)


def matmul(a, b):
    return [[sum(a[i][t] * b[t][j] for t in range(len(b))) for j in range(len(b[0]))]
            for i in range(len(a))]


def minor_gcd_oracle(mat, size):
    """gcd of all size x size minors, computed naively."""
    rows, cols = len(mat), len(mat[0])
    g = 0
    for ri in itertools.combinations(range(rows), size):
        for ci in itertools.combinations(range(cols), size):
            sub = [[mat[i][j] for j in ci] for i in ri]
            g = math.gcd(g, det_int(sub))
    return g


def det_int(m):
    n = len(m)
    if n == 1:
        return m[0][0]
    total = 0
    for j in range(n):
        sub = [row[:j] + row[j + 1:] for row in m[1:]]
        total += (-1) ** j * m[0][j] * det_int(sub)
    return total


class TestIntegerSNF:
    def test_transforms(self):
        rng = random.Random(3)
        for _ in range(30):
            rows, cols = rng.randrange(1, 5), rng.randrange(1, 5)
            mat = [[rng.randrange(-9, 10) for _ in range(cols)] for _ in range(rows)]
            d, u, v = smith_normal_form(mat)
            assert matmul(matmul(u, mat), v) == d
            diag = [d[i][i] for i in range(min(rows, cols))]
            for i in range(len(diag) - 1):
                if diag[i + 1]:
                    assert diag[i] != 0 and diag[i + 1] % diag[i] == 0
            for i in range(rows):
                for j in range(cols):
                    if i != j:
                        assert d[i][j] == 0

    def test_invariant_factors_vs_minor_gcd(self):
        # spec invariant: SNF of integer matrices agrees with a naive
        # minor-gcd oracle on 4x4 random matrices
        rng = random.Random(17)
        for _ in range(20):
            mat = [[rng.randrange(-6, 7) for _ in range(4)] for _ in range(4)]
            diag = snf_diagonal(mat)
            prev = 1
            for i, dd in enumerate(diag):
                g = minor_gcd_oracle(mat, i + 1)
                assert g == prev * dd
                prev = g


class TestZpk:
    def test_smith_transforms(self):
        rng = random.Random(5)
        p, k = 3, 5
        pk = p ** k
        for _ in range(30):
            rows, cols = rng.randrange(1, 5), rng.randrange(1, 5)
            mat = [[rng.randrange(pk) for _ in range(cols)] for _ in range(rows)]
            vals, u, v = zpk_smith(mat, p, k)
            prod = matmul(matmul(u, mat), v)
            for i in range(rows):
                for j in range(cols):
                    expected = p ** vals[i] % pk if (i == j and i < len(vals) and vals[i] < k) else 0
                    assert prod[i][j] % pk == expected
            assert vals == sorted(vals)

    def test_solve_matches_bruteforce(self):
        rng = random.Random(11)
        p, k = 2, 3
        pk = p ** k
        for _ in range(40):
            rows, cols = rng.randrange(1, 4), rng.randrange(1, 4)
            mat = [[rng.randrange(pk) for _ in range(cols)] for _ in range(rows)]
            rhs = [rng.randrange(pk) for _ in range(rows)]
            brute = None
            for cand in itertools.product(range(pk), repeat=cols):
                if all(sum(mat[i][j] * cand[j] for j in range(cols)) % pk == rhs[i] % pk
                       for i in range(rows)):
                    brute = cand
                    break
            got = zpk_solve(mat, rhs, p, k)
            if brute is None:
                assert got is None
            else:
                assert got is not None
                assert all(sum(mat[i][j] * got[j] for j in range(cols)) % pk == rhs[i] % pk
                           for i in range(rows))

    def test_kernel_spans_bruteforce(self):
        rng = random.Random(13)
        p, k = 2, 2
        pk = p ** k
        for _ in range(25):
            rows, cols = rng.randrange(1, 3), rng.randrange(1, 4)
            mat = [[rng.randrange(pk) for _ in range(cols)] for _ in range(rows)]
            brute = {cand for cand in itertools.product(range(pk), repeat=cols)
                     if all(sum(mat[i][j] * cand[j] for j in range(cols)) % pk == 0
                            for i in range(rows))}
            gens = zpk_kernel(mat, p, k)
            span = {tuple([0] * cols)}
            for g in gens:
                new = set()
                for s in span:
                    acc = list(s)
                    for _ in range(pk):
                        new.add(tuple(acc))
                        acc = [(a + b) % pk for a, b in zip(acc, g)]
                span = new
            assert span == brute

    def test_cokernel_order(self):
        # coker of diag(p, p^2) inside (Z/p^4)^2 has order p^3
        p, k = 3, 4
        mat = [[p, 0], [0, p * p]]
        assert zpk_module_order_exponent(mat, p, k) == 3
        assert sorted(zpk_cokernel_exponents(mat, p, k)) == [1, 2]

    def test_cokernel_zero_map(self):
        assert zpk_module_order_exponent([[0, 0], [0, 0]], 2, 5) == 10


class TestHensel:
    def test_phi4_mod3(self):
        # Phi_4 = x^2 + 1 is irreducible mod 3: single factor lifts trivially
        f = [1, 0, 1]
        out = hensel_lift_factors(f, [[1, 0, 1]], 3, 6)
        assert out == [[1, 0, 1]]

    def test_x2_minus_1_mod3(self):
        # x^2 - 1 = (x+1)(x+2) mod 3; lift to mod 3^5
        f = [-1, 0, 1]
        out = hensel_lift_factors(f, [[1, 1], [2, 1]], 3, 5)
        pk = 3 ** 5
        prod = [1]
        for g in out:
            tmp = [0] * (len(prod) + len(g) - 1)
            for i, a in enumerate(prod):
                for j, b in enumerate(g):
                    tmp[i + j] = (tmp[i + j] + a * b) % pk
            prod = tmp
        assert prod == [c % pk for c in f]

    def test_cyclotomic_12_mod_5(self):
        # Phi_12 = x^4 - x^2 + 1 factors mod 5 as two quadratics
        from ctower.ffpoly import FqField, FqPoly, factor

        F5 = FqField(5)
        phi12 = [1, 0, -1 % 5, 0, 1]
        facs = factor(FqPoly(F5, phi12))
        assert all(m == 1 for _, m in facs)
        lifted = hensel_lift_factors([1, 0, -1, 0, 1], [list(g.coeffs) for g, _ in facs], 5, 8)
        pk = 5 ** 8
        prod = [1]
        for g in lifted:
            tmp = [0] * (len(prod) + len(g) - 1)
            for i, a in enumerate(prod):
                for j, b in enumerate(g):
                    tmp[i + j] = (tmp[i + j] + a * b) % pk
            prod = tmp
        assert prod == [c % pk for c in [1, 0, -1, 0, 1]]

"""Exact linear algebra: integer Smith normal form, elimination over Z/p^k,
and Hensel lifting of polynomial factorizations mod p^k.

Z/p^k is a local principal ideal ring, so Gaussian elimination with
minimal-valuation pivoting yields a Smith form diag(p^v_1, ..., p^v_r)
with v_1 <= v_2 <= ... and unit transforms; no integer coefficient blowup.
"""

from __future__ import annotations


# ---------------------------------------------------------------------------
# integer Smith normal form
# ---------------------------------------------------------------------------


def smith_normal_form(mat):
    """(D, U, V) with U*M*V = D over Z, D in Smith form, U, V unimodular."""
    m = [row[:] for row in mat]
    rows, cols = len(m), len(m[0]) if m else 0
    U = [[int(i == j) for j in range(rows)] for i in range(rows)]
    V = [[int(i == j) for j in range(cols)] for i in range(cols)]

    def swap_rows(i, j):
        m[i], m[j] = m[j], m[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in range(rows):
            m[r][i], m[r][j] = m[r][j], m[r][i]
        for r in range(cols):
            V[r][i], V[r][j] = V[r][j], V[r][i]

    def addmul_row(dst, src, c):
        m[dst] = [a + c * b for a, b in zip(m[dst], m[src])]
        U[dst] = [a + c * b for a, b in zip(U[dst], U[src])]

    def addmul_col(dst, src, c):
        for r in range(rows):
            m[r][dst] += c * m[r][src]
        for r in range(cols):
            V[r][dst] += c * V[r][src]

    def negate_row(i):
        m[i] = [-a for a in m[i]]
        U[i] = [-a for a in U[i]]

    t = 0
    while t < min(rows, cols):
        # locate minimal nonzero |entry| in the remaining block
        pivot = None
        for i in range(t, rows):
            for j in range(t, cols):
                if m[i][j] and (pivot is None or abs(m[i][j]) < abs(m[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])
        dirty = False
        for i in range(t + 1, rows):
            if m[i][t]:
                q = m[i][t] // m[t][t]
                addmul_row(i, t, -q)
                if m[i][t]:
                    dirty = True
        for j in range(t + 1, cols):
            if m[t][j]:
                q = m[t][j] // m[t][t]
                addmul_col(j, t, -q)
                if m[t][j]:
                    dirty = True
        if dirty:
            continue
        # enforce divisibility of the rest of the block by the pivot
        offender = None
        for i in range(t + 1, rows):
            for j in range(t + 1, cols):
                if m[i][j] % m[t][t]:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            addmul_row(t, offender, 1)
            continue
        if m[t][t] < 0:
            negate_row(t)
        t += 1
    return m, U, V


def snf_diagonal(mat):
    """Nonzero invariant factors d_1 | d_2 | ... of an integer matrix."""
    d, _, _ = smith_normal_form(mat)
    out = []
    for i in range(min(len(d), len(d[0]) if d else 0)):
        if d[i][i]:
            out.append(abs(d[i][i]))
    return out


# ---------------------------------------------------------------------------
# Z/p^k elimination
# ---------------------------------------------------------------------------


def _val(a, p, k):
    if a == 0:
        return k
    v = 0
    while a % p == 0 and v < k:
        a //= p
        v += 1
    return v


def zpk_smith(mat, p, k):
    """(diag, U, V) with U*M*V = diag(p^v_1,...) mod p^k, U, V units mod p^k.

    diag is returned as the list of exponents v_1 <= v_2 <= ... (v_i = k for
    entries that vanish mod p^k), padded to min(rows, cols).
    """
    pk = p ** k
    m = [[a % pk for a in row] for row in mat]
    rows, cols = len(m), len(m[0]) if m else 0
    U = [[int(i == j) for j in range(rows)] for i in range(rows)]
    V = [[int(i == j) for j in range(cols)] for i in range(cols)]

    t = 0
    vals = []
    while t < min(rows, cols):
        best, best_v = None, k
        for i in range(t, rows):
            for j in range(t, cols):
                v = _val(m[i][j], p, k)
                if v < best_v:
                    best, best_v = (i, j), v
        if best is None or best_v >= k:
            break
        i0, j0 = best
        m[t], m[i0] = m[i0], m[t]
        U[t], U[i0] = U[i0], U[t]
        if j0 != t:
            for r in range(rows):
                m[r][t], m[r][j0] = m[r][j0], m[r][t]
            for r in range(cols):
                V[r][t], V[r][j0] = V[r][j0], V[r][t]
        v = best_v
        unit = m[t][t] // p ** v
        unit_inv = pow(unit, -1, pk)
        # normalize pivot row so the pivot is exactly p^v
        m[t] = [(a * unit_inv) % pk for a in m[t]]
        U[t] = [(a * unit_inv) % pk for a in U[t]]
        for i in range(rows):
            if i != t and m[i][t]:
                c = m[i][t] // p ** v  # exact: v is the minimal valuation
                m[i] = [(a - c * b) % pk for a, b in zip(m[i], m[t])]
                U[i] = [(a - c * b) % pk for a, b in zip(U[i], U[t])]
        for j in range(cols):
            if j != t and m[t][j]:
                c = m[t][j] // p ** v
                for r in range(rows):
                    m[r][j] = (m[r][j] - c * m[r][t]) % pk
                for r in range(cols):
                    V[r][j] = (V[r][j] - c * V[r][t]) % pk
        vals.append(v)
        t += 1
    while len(vals) < min(rows, cols):
        vals.append(k)
    return vals, U, V


def zpk_solve(mat, rhs, p, k):
    """One solution x of M x = rhs mod p^k, or None if inconsistent."""
    pk = p ** k
    rows = len(mat)
    cols = len(mat[0]) if rows else 0
    vals, U, V = zpk_smith(mat, p, k)
    y = [sum(U[i][j] * rhs[j] for j in range(rows)) % pk for i in range(rows)]
    z = [0] * cols
    for i in range(rows):
        v = vals[i] if i < len(vals) else k
        if v >= k:
            if i < len(y) and y[i] % pk:
                return None
            continue
        if y[i] % (p ** v):
            return None
        z[i] = y[i] // p ** v
    for i in range(min(len(vals), rows), rows):
        if y[i] % pk:
            return None
    x = [sum(V[i][j] * z[j] for j in range(cols)) % pk for i in range(cols)]
    return x


def zpk_kernel(mat, p, k):
    """Generating set for {x : M x = 0 mod p^k} as vectors mod p^k."""
    pk = p ** k
    cols = len(mat[0]) if mat else 0
    vals, _, V = zpk_smith(mat, p, k)
    gens = []
    for j in range(cols):
        v = vals[j] if j < len(vals) else k
        scale = p ** (k - v) if v < k else 1
        if v == 0:
            continue
        vec = [(V[i][j] * scale) % pk for i in range(cols)]
        if any(vec):
            gens.append(vec)
    return gens


def zpk_cokernel_exponents(mat, p, k):
    """Exponents e_i with (Z/p^k)^rows / colspan(M) = prod Z/p^{e_i}."""
    rows = len(mat)
    cols = len(mat[0]) if rows else 0
    vals, _, _ = zpk_smith(mat, p, k)
    out = [min(v, k) for v in vals]
    out.extend([k] * (rows - min(rows, cols)))
    return [e for e in out if e > 0]


def zpk_module_order_exponent(mat, p, k):
    """log_p of |(Z/p^k)^rows / colspan(M)|."""
    return sum(zpk_cokernel_exponents(mat, p, k))


# ---------------------------------------------------------------------------
# Hensel lifting
# ---------------------------------------------------------------------------


def _ipoly_trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _ipoly_mul(a, b, mod):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % mod
    return _ipoly_trim(out)


def _ipoly_sub(a, b, mod):
    n = max(len(a), len(b))
    return _ipoly_trim([((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % mod for i in range(n)])


def _ipoly_divmod_monic(a, b, mod):
    a = list(a)
    db = len(b) - 1
    quo = [0] * max(len(a) - db, 0)
    while len(_ipoly_trim(a)) - 1 >= db:
        a = _ipoly_trim(a)
        c = a[-1] % mod
        shift = len(a) - 1 - db
        quo[shift] = c
        for i, bi in enumerate(b):
            a[shift + i] = (a[shift + i] - c * bi) % mod
        a = a[:-1]
    return _ipoly_trim(quo), _ipoly_trim(a)


def hensel_lift_pair(f, g, h, p, k):
    """Lift f = g*h (mod p), g monic, h monic, gcd(g,h)=1 mod p, to mod p^k."""
    from .ffpoly import FqField, FqPoly

    F = FqField(p)
    gp = FqPoly(F, [c % p for c in g])
    hp = FqPoly(F, [c % p for c in h])
    one, s, t = gp.extended_gcd(hp)
    if not one.is_one():
        raise ValueError("factors are not coprime mod p")
    s, t = list(s.coeffs), list(t.coeffs)

    g, h = list(g), list(h)
    pj = p
    while pj < p ** k:
        mod_next = pj * p
        e = _ipoly_sub(f, _ipoly_mul(g, h, mod_next), mod_next)
        delta = [c // pj for c in e]
        # a = delta*t mod g ; b = (delta - h*a)/g, both mod p
        a_full = _ipoly_mul(delta, t, p)
        _, a = _ipoly_divmod_monic(a_full, [c % p for c in g], p)
        num = _ipoly_sub(delta, _ipoly_mul([c % p for c in h], a, p), p)
        b, rem = _ipoly_divmod_monic(num, [c % p for c in g], p)
        if rem:
            raise ArithmeticError("Hensel correction not divisible")
        g = _ipoly_trim([(gi + pj * (a[i] if i < len(a) else 0)) % mod_next
                         for i, gi in enumerate(g + [0] * (len(a) - len(g)))])
        h = _ipoly_trim([(hi + pj * (b[i] if i < len(b) else 0)) % mod_next
                         for i, hi in enumerate(h + [0] * (len(b) - len(h)))])
        pj = mod_next
    return g, h


def hensel_lift_factors(f, factors_mod_p, p, k):
    """Lift pairwise-coprime monic factors of monic f from mod p to mod p^k."""
    pk = p ** k
    f = [c % pk for c in f]
    out = []
    remaining = f
    facs = list(factors_mod_p)
    for i, g in enumerate(facs):
        if i == len(facs) - 1:
            out.append(_ipoly_trim([c % pk for c in remaining]))
            break
        cof = [1]
        for other in facs[i + 1:]:
            cof = _ipoly_mul(cof, other, p)
        g_lift, cof_lift = hensel_lift_pair(remaining, [c % p for c in g], cof, p, k)
        out.append(g_lift)
        remaining = cof_lift
    # verify
    prod = [1]
    for g in out:
        prod = _ipoly_mul(prod, g, pk)
    if _ipoly_sub(prod, f, pk):
        raise ArithmeticError("Hensel lift failed to reconstruct the input")
    return out

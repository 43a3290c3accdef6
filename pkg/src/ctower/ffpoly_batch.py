"""Vectorized enumeration of monic irreducibles for large q^d.

A degree-d monic over F_q is irreducible iff no irreducible of degree
<= d//2 divides it.  The sieve runs trial division by all cached smaller
irreducibles simultaneously over the whole candidate block with numpy;
field arithmetic goes through packed-int lookup tables so it works for
prime powers q as well as primes.
"""

from __future__ import annotations

import numpy as np


def _field_tables(field):
    q = field.q
    if field.e == 1:
        p = field.p
        mul = (np.arange(q)[:, None] * np.arange(q)[None, :]) % p
        sub = (np.arange(q)[:, None] - np.arange(q)[None, :]) % p
    else:
        mul = np.zeros((q, q), dtype=np.int64)
        sub = np.zeros((q, q), dtype=np.int64)
        for a in range(q):
            for b in range(q):
                mul[a, b] = field.mul(a, b)
                sub[a, b] = field.sub(a, b)
    return mul.astype(np.int64), sub.astype(np.int64)


def irreducible_coeffs(field, d: int, irreducible_list):
    """All coefficient tuples (c_0..c_{d-1}) of monic irreducibles of degree d.

    irreducible_list(field, e) supplies the smaller irreducibles (memoized by
    the caller, so recursion stays in the pure-Python path for small e).
    """
    q = field.q
    mul, sub = _field_tables(field)

    # candidate coefficient block, one row per monic (implicit leading 1)
    n = q ** d
    idx = np.arange(n, dtype=np.int64)
    cand = np.empty((n, d), dtype=np.int64)
    for j in range(d):
        cand[:, j] = idx % q
        idx //= q

    alive = np.ones(n, dtype=bool)
    for e in range(1, d // 2 + 1):
        divisors = [g.coeffs for g in irreducible_list(field, e)]
        rows = np.nonzero(alive)[0]
        block = cand[rows]
        keep = np.ones(len(rows), dtype=bool)
        for g in divisors:
            rem = _remainder(block, g, d, mul, sub)
            keep &= rem.any(axis=1)
            if not keep.any():
                break
        alive[rows[~keep]] = False

    rows = np.nonzero(alive)[0]
    out = [tuple(int(c) for c in cand[r]) for r in rows]
    out.sort()
    return out


def _remainder(block, g, d, mul, sub):
    """Remainder of x^d + block-rows modulo monic g, vectorized over rows."""
    dg = len(g) - 1
    # work array holds coefficients 0..d; leading coefficient is 1
    work = np.zeros((block.shape[0], d + 1), dtype=np.int64)
    work[:, :d] = block
    work[:, d] = 1
    for t in range(d, dg - 1, -1):
        lead = work[:, t]
        nz = lead != 0
        if not nz.any():
            continue
        shift = t - dg
        for j in range(dg):
            if g[j]:
                work[nz, shift + j] = sub[work[nz, shift + j], mul[lead[nz], g[j]]]
        work[:, t] = 0
    return work[:, :dg]

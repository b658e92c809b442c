"""Univariate polynomials over GF(q) as little-endian code arrays.

Only what the module-analysis code needs: products, division, gcd, powers
modulo a polynomial, and splitting into irreducible factors by distinct- and
equal-degree factorization.
"""

from __future__ import annotations

import numpy as np

from .field import FieldCtx
from .matrix import Matrix


def trim(a) -> np.ndarray:
    a = np.asarray(a, dtype=np.int64)
    nz = np.flatnonzero(a)
    return a[: nz[-1] + 1].copy() if nz.size else a[:0].copy()


def degree(a) -> int:
    return len(trim(a)) - 1


def monic(ctx: FieldCtx, a) -> np.ndarray:
    a = trim(a)
    if a.size == 0:
        return a
    return np.asarray(ctx.mul(a, ctx.inv(int(a[-1]))), dtype=np.int64)


def add(ctx: FieldCtx, a, b) -> np.ndarray:
    a, b = np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)
    n = max(len(a), len(b))
    aa = np.zeros(n, dtype=np.int64)
    bb = np.zeros(n, dtype=np.int64)
    aa[: len(a)] = a
    bb[: len(b)] = b
    return trim(ctx.add(aa, bb))


def sub(ctx: FieldCtx, a, b) -> np.ndarray:
    return add(ctx, a, ctx.neg(np.asarray(b, dtype=np.int64)))


def mul(ctx: FieldCtx, a, b) -> np.ndarray:
    a, b = trim(a), trim(b)
    if a.size == 0 or b.size == 0:
        return np.zeros(0, dtype=np.int64)
    pa, pb = ctx.digits(a), ctx.digits(b)
    m = ctx.m
    n = len(a) + len(b) - 1
    z = np.zeros((2 * m - 1, n), dtype=np.int64)
    for i in range(m):
        for j in range(m):
            z[i + j] += np.convolve(pa[i], pb[j])
    z %= ctx.p
    coeff = np.tensordot(ctx.reduction.T, z, axes=(1, 0))
    return trim(ctx.from_digits(coeff))


def divmod_(ctx: FieldCtx, a, b) -> tuple[np.ndarray, np.ndarray]:
    a, b = trim(a), trim(b)
    if b.size == 0:
        raise ZeroDivisionError("polynomial division by zero")
    r = a.copy()
    db = len(b) - 1
    if len(r) - 1 < db:
        return np.zeros(0, dtype=np.int64), r
    inv_lead = ctx.inv(int(b[-1]))
    qt = np.zeros(len(r) - db, dtype=np.int64)
    for k in range(len(r) - 1, db - 1, -1):
        c = int(r[k])
        if c == 0:
            continue
        f = ctx.mul(c, inv_lead)
        qt[k - db] = f
        r[k - db : k + 1] = ctx.sub(r[k - db : k + 1], ctx.mul(b, f))
    return trim(qt), trim(r)


def mod(ctx: FieldCtx, a, b) -> np.ndarray:
    return divmod_(ctx, a, b)[1]


def gcd(ctx: FieldCtx, a, b) -> np.ndarray:
    a, b = trim(a), trim(b)
    while b.size:
        a, b = b, mod(ctx, a, b)
    return monic(ctx, a)


def powmod(ctx: FieldCtx, base, e: int, modulus) -> np.ndarray:
    result = np.array([1], dtype=np.int64)
    base = mod(ctx, base, modulus)
    while e:
        if e & 1:
            result = mod(ctx, mul(ctx, result, base), modulus)
        e >>= 1
        if e:
            base = mod(ctx, mul(ctx, base, base), modulus)
    return result


def derivative(ctx: FieldCtx, a) -> np.ndarray:
    a = trim(a)
    if a.size <= 1:
        return np.zeros(0, dtype=np.int64)
    ks = np.arange(1, len(a)) % ctx.p
    return trim(ctx.mul(a[1:], ks))


X = np.array([0, 1], dtype=np.int64)


def _frobenius_power(ctx: FieldCtx, h, modulus) -> np.ndarray:
    return powmod(ctx, h, ctx.q, modulus)


def _equal_degree_split(ctx: FieldCtx, g, d: int, rng: np.random.Generator) -> list[np.ndarray]:
    """Split a product of distinct monic irreducibles of degree ``d``."""
    g = monic(ctx, g)
    if len(g) - 1 == d:
        return [g]
    n = len(g) - 1
    while True:
        a = trim(ctx.random(rng, n))
        if a.size < 2:
            continue
        if ctx.p == 2:
            # absolute trace to GF(2): a + a^2 + ... + a^(2^(md-1))
            t = a.copy()
            cur = a.copy()
            for _ in range(ctx.m * d - 1):
                cur = mod(ctx, mul(ctx, cur, cur), g)
                t = add(ctx, t, cur)
        else:
            t = sub(ctx, powmod(ctx, a, (ctx.q**d - 1) // 2, g), [1])
        h = gcd(ctx, g, t)
        if 0 < len(h) - 1 < n:
            return _equal_degree_split(ctx, h, d, rng) + _equal_degree_split(
                ctx, divmod_(ctx, g, h)[0], d, rng
            )


def irreducible_factors(
    ctx: FieldCtx, f, rng: np.random.Generator, max_degree: int | None = None
) -> list[np.ndarray]:
    """Distinct monic irreducible factors of ``f``, sorted by degree.

    Factors of degree above ``max_degree`` are not separated from each other;
    the loop stops once that degree is passed.
    """
    f = monic(ctx, f)
    if len(f) <= 1:
        return []
    out: list[np.ndarray] = []
    rem = f
    h = X
    d = 0
    limit = len(f) - 1 if max_degree is None else max_degree
    while len(rem) - 1 >= 2 * (d + 1) and d < limit:
        d += 1
        h = _frobenius_power(ctx, h, rem)
        g = gcd(ctx, rem, sub(ctx, h, X))
        if len(g) > 1:
            out.extend(_equal_degree_split(ctx, g, d, rng))
            while True:
                qt, r = divmod_(ctx, rem, g)
                if r.size:
                    break
                rem = qt
                g = gcd(ctx, rem, g)
                if len(g) <= 1:
                    break
            h = mod(ctx, h, rem) if len(rem) > 1 else h
    if len(rem) > 1 and (max_degree is None or len(rem) - 1 <= max_degree):
        # what is left is irreducible
        out.append(monic(ctx, rem))
    out.sort(key=lambda g: (len(g), g.tolist()))
    return out


def eval_matrix(f, A: Matrix) -> Matrix:
    """f(A) by Horner's rule."""
    f = trim(f)
    ctx = A.ctx
    n = A.rows
    result = Matrix.zeros(ctx, n, n)
    eye = np.eye(n, dtype=np.int64)
    for c in f[::-1]:
        result = result @ A
        if c:
            result = Matrix._wrap(ctx, ctx.add(result.data, ctx.mul(eye, int(c))))
    return result


def min_poly_vector(A: Matrix, v) -> np.ndarray:
    """Monic generator of {g : g(A) v = 0}, from the Krylov sequence of v."""
    from .matrix import rref_codes

    ctx = A.ctx
    v = np.asarray(v, dtype=np.int64)
    if not v.any():
        return np.array([1], dtype=np.int64)
    krylov = [v]
    for _ in range(A.rows):
        krylov.append(A @ krylov[-1])
    cols = np.stack(krylov, axis=1)
    R, piv = rref_codes(ctx, cols)
    r = len(piv)
    assert piv == list(range(r))
    return trim(np.concatenate([ctx.neg(R[:r, r]), [1]]))

"""Univariate polynomials over a FieldCtx.

A polynomial is an int64 array of shape (deg + 1, m), little-endian,
with a nonzero leading row; the zero polynomial has shape (0, m).
"""

from __future__ import annotations

import random

import numpy as np

from .gf import FieldCtx


def trim(f: np.ndarray) -> np.ndarray:
    nz = np.flatnonzero(f.any(axis=1))
    if len(nz) == 0:
        return f[:0]
    return f[: nz[-1] + 1]


def deg(f: np.ndarray) -> int:
    return len(f) - 1


def const(ctx: FieldCtx, c) -> np.ndarray:
    return trim(ctx.asarray([c]))


def x(ctx: FieldCtx) -> np.ndarray:
    return ctx.asarray([0, 1])


def add(ctx: FieldCtx, f, g) -> np.ndarray:
    n = max(len(f), len(g))
    out = ctx.zeros(n)
    out[: len(f)] += f
    out[: len(g)] += g
    return trim(out % ctx.p)


def sub(ctx: FieldCtx, f, g) -> np.ndarray:
    n = max(len(f), len(g))
    out = ctx.zeros(n)
    out[: len(f)] += f
    out[: len(g)] -= g
    return trim(out % ctx.p)


def mul(ctx: FieldCtx, f, g) -> np.ndarray:
    if len(f) == 0 or len(g) == 0:
        return ctx.zeros(0)
    if ctx.m == 1:
        return trim((np.convolve(f[:, 0], g[:, 0]) % ctx.p)[:, None])
    prods = ctx.amul(f[:, None, :], g[None, :, :])
    out = ctx.zeros(len(f) + len(g) - 1)
    for i in range(len(f)):
        out[i:i + len(g)] += prods[i]
    return trim(out % ctx.p)


def scale(ctx: FieldCtx, f, c: np.ndarray) -> np.ndarray:
    return trim(ctx.amul(f, c[None, :]))


def monic(ctx: FieldCtx, f) -> np.ndarray:
    if len(f) == 0:
        return f
    return scale(ctx, f, ctx.ainv_scalar(f[-1]))


def divmod_(ctx: FieldCtx, f, g):
    """Quotient and remainder of f by nonzero g."""
    if len(g) == 0:
        raise ZeroDivisionError("polynomial division by zero")
    p = ctx.p
    r = f.copy()
    dg = len(g) - 1
    if len(r) - 1 < dg:
        return ctx.zeros(0), trim(r)
    inv_lead = ctx.ainv_scalar(g[-1])
    q = ctx.zeros(len(r) - dg)
    if ctx.m == 1:
        rr = [int(v) for v in r[:, 0]]
        gg = [int(v) for v in g[:, 0]]
        il = int(inv_lead[0])
        qq = [0] * (len(rr) - dg)
        for k in range(len(rr) - 1, dg - 1, -1):
            c = rr[k] * il % p
            if c:
                qq[k - dg] = c
                base = k - dg
                for i, gi in enumerate(gg):
                    if gi:
                        rr[base + i] = (rr[base + i] - c * gi) % p
        q[:, 0] = qq
        r = np.asarray(rr[:dg] if dg else [], dtype=np.int64).reshape(-1, 1)
        return trim(q), trim(r)
    for k in range(len(r) - 1, dg - 1, -1):
        if not r[k].any():
            continue
        c = ctx.amul(r[k], inv_lead)
        q[k - dg] = c
        r[k - dg:k + 1] = (r[k - dg:k + 1] - ctx.amul(g, c[None, :])) % p
    return trim(q), trim(r[:dg])


def mod(ctx: FieldCtx, f, g) -> np.ndarray:
    return divmod_(ctx, f, g)[1]


def gcd(ctx: FieldCtx, f, g) -> np.ndarray:
    a, b = trim(f), trim(g)
    while len(b):
        a, b = b, mod(ctx, a, b)
    return monic(ctx, a)


def powmod(ctx: FieldCtx, f, e: int, m_) -> np.ndarray:
    result = mod(ctx, const(ctx, 1), m_)
    base = mod(ctx, f, m_)
    while e:
        if e & 1:
            result = mod(ctx, mul(ctx, result, base), m_)
        e >>= 1
        if e:
            base = mod(ctx, mul(ctx, base, base), m_)
    return result


def equal(f, g) -> bool:
    return f.shape == g.shape and bool((f == g).all())


def is_one(f) -> bool:
    return len(f) == 1 and f[0, 0] == 1 and not f[0, 1:].any()


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_irreducible(ctx: FieldCtx, f) -> bool:
    """Rabin's test over GF(q)."""
    f = monic(ctx, trim(f))
    n = deg(f)
    if n < 1:
        return False
    if n == 1:
        return True
    q = ctx.order
    t = x(ctx)
    if not equal(sub(ctx, _frob_power(ctx, t, n, f), mod(ctx, t, f)), ctx.zeros(0)):
        return False
    for r in _prime_factors(n):
        h = sub(ctx, _frob_power(ctx, t, n // r, f), t)
        if not is_one(gcd(ctx, f, h)):
            return False
    _ = q
    return True


def _frob_power(ctx: FieldCtx, g, k: int, f) -> np.ndarray:
    """g^(q^k) mod f."""
    out = mod(ctx, g, f)
    for _ in range(k):
        out = powmod(ctx, out, ctx.order, f)
    return out


def smallest_degree_factors(ctx: FieldCtx, f, rng: random.Random):
    """Irreducible monic factors of f having the least degree among all
    irreducible factors of f; returns (degree, factors)."""
    f = monic(ctx, trim(f))
    if deg(f) < 1:
        return 0, []
    t = x(ctx)
    xp = mod(ctx, t, f)
    for d in range(1, deg(f) + 1):
        xp = powmod(ctx, xp, ctx.order, f)
        h = gcd(ctx, f, sub(ctx, xp, t))
        if deg(h) > 0:
            return d, equal_degree_split(ctx, h, d, rng)
    raise AssertionError("a polynomial of positive degree has an irreducible factor")


def equal_degree_split(ctx: FieldCtx, h, d: int, rng: random.Random) -> list:
    """Cantor-Zassenhaus splitting of a squarefree product of degree-d
    irreducibles."""
    h = monic(ctx, h)
    n = deg(h)
    if n == d:
        return [h]
    q = ctx.order
    while True:
        a = trim(np.stack([ctx.random_element(rng).coeffs for _ in range(n)]).astype(np.int64)
                 if n else ctx.zeros(0))
        if deg(a) < 1:
            continue
        if ctx.p == 2:
            # absolute trace F_{q^d} -> F_2
            acc = mod(ctx, a, h)
            cur = acc
            for _ in range(ctx.m * d - 1):
                cur = mod(ctx, mul(ctx, cur, cur), h)
                acc = add(ctx, acc, cur)
            b = acc
        else:
            b = sub(ctx, powmod(ctx, a, (q ** d - 1) // 2, h), const(ctx, 1))
        g = gcd(ctx, h, b)
        if 0 < deg(g) < n:
            other = divmod_(ctx, h, g)[0]
            return equal_degree_split(ctx, g, d, rng) + equal_degree_split(ctx, other, d, rng)


def roots(ctx: FieldCtx, f, rng: random.Random | None = None) -> list:
    """All roots of f in ctx, as FieldElems sorted by code."""
    rng = rng or random.Random(0)
    f = monic(ctx, trim(f))
    if deg(f) < 1:
        return []
    t = x(ctx)
    h = gcd(ctx, f, sub(ctx, powmod(ctx, t, ctx.order, f), t))
    if deg(h) < 1:
        return []
    out = []
    for lin in equal_degree_split(ctx, h, 1, rng):
        # lin = t + c, root -c
        out.append(ctx.elem((-lin[0]) % ctx.p))
    return sorted(out, key=lambda e: e.code)


def evaluate(ctx: FieldCtx, f, a: np.ndarray) -> np.ndarray:
    acc = ctx.zeros(())
    for c in f[::-1]:
        acc = (ctx.amul(acc, a) + c) % ctx.p
    return acc

"""Independent brute-force oracles shared by the test modules.

Everything here is written with plain Python sets and tuples and avoids
the vectorized code paths it is used to check.
"""

from __future__ import annotations

import itertools


def poly_mulmod(a, b, modulus, p):
    """Multiply coefficient lists (constant term first) mod a monic modulus over F_p."""
    m = len(modulus) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            prod[i + j] = (prod[i + j] + x * y) % p
    for d in range(len(prod) - 1, m - 1, -1):
        c = prod[d]
        if c:
            for k in range(m + 1):
                prod[d - m + k] = (prod[d - m + k] - c * modulus[k]) % p
    return (prod + [0] * m)[:m]


def to_digits(a, p, m):
    return [(a // p**i) % p for i in range(m)]


def from_digits(ds, p):
    return sum(d * p**i for i, d in enumerate(ds))


def naive_mul(F, a, b):
    return from_digits(poly_mulmod(to_digits(a, F.p, F.m), to_digits(b, F.p, F.m), list(F.modulus), F.p), F.p)


def naive_add(F, a, b):
    return from_digits([(x + y) % F.p for x, y in zip(to_digits(a, F.p, F.m), to_digits(b, F.p, F.m))], F.p)


def space(F, n):
    return list(itertools.product(range(F.q), repeat=n))


def vadd(F, u, v):
    return tuple(F.add(a, b) for a, b in zip(u, v))


def vscale(F, c, v):
    return tuple(F.mul(c, a) for a in v)


def span_points(F, vectors, n):
    pts = {tuple([0] * n)}
    for v in vectors:
        pts = {vadd(F, x, vscale(F, c, v)) for x in pts for c in range(F.q)}
    return frozenset(pts)


def brute_subspaces(F, n, r):
    """All r-dimensional subspaces as frozensets of points (deduplicated spans)."""
    out = set()
    for vecs in itertools.combinations(space(F, n), r):
        S = span_points(F, vecs, n)
        if len(S) == F.q**r:
            out.add(S)
    return out


def brute_is_kakeya(F, K, n, r):
    K = set(K)
    for L in brute_subspaces(F, n, r):
        if not any(all(vadd(F, v, x) in K for x in L) for v in space(F, n)):
            return False
    return True


def brute_is_universal(F, U, n, k):
    U = set(U)
    pts = space(F, n)
    for A in itertools.combinations(pts, k):
        if not any(all(vadd(F, v, a) in U for a in A) for v in pts):
            return False
    return True


def brute_if_size(F, f, t):
    return len({F.add(f(x), F.mul(t, x)) for x in range(F.q)})

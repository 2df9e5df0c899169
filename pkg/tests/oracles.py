"""Slow, obviously-correct reference implementations used only by the tests.

Nothing here imports the library: arithmetic is plain modular or
carry-less polynomial arithmetic, determinants are written out, and
linear systems are solved with a textbook elimination on Python lists.
"""

from __future__ import annotations

import itertools


class RefField:
    """GF(p) or GF(2^m) with schoolbook arithmetic."""

    def __init__(self, p: int, m: int = 1, modulus: int | None = None):
        self.p, self.m, self.modulus = p, m, modulus
        self.q = p**m
        if m > 1:
            assert p == 2 and modulus is not None

    def add(self, a, b):
        return a ^ b if self.m > 1 else (a + b) % self.p

    def neg(self, a):
        return a if self.m > 1 else (-a) % self.p

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if self.m == 1:
            return (a * b) % self.p
        r = 0
        while b:
            if b & 1:
                r ^= a
            b >>= 1
            a <<= 1
            if a >> self.m:
                a ^= self.modulus
        return r

    def inv(self, a):
        assert a != 0
        for c in range(1, self.q):
            if self.mul(a, c) == 1:
                return c
        raise AssertionError("no inverse")

    def dot(self, u, v):
        acc = 0
        for a, b in zip(u, v):
            acc = self.add(acc, self.mul(a, b))
        return acc


def det2(F: RefField, a, b, c, d):
    return F.sub(F.mul(a, d), F.mul(b, c))


def lex_pairs(b):
    return [(i, j) for i in range(b) for j in range(i + 1, b)]


def phi(F: RefField, v, u):
    return [det2(F, v[i], v[j], u[i], u[j]) for i, j in lex_pairs(len(v))]


def unit(b, k):
    return [int(i == k) for i in range(b)]


def pivot(v):
    return next(i for i, c in enumerate(v) if c)


def payload(F: RefField, v, x):
    """φ(v; e_j)·x for j != pivot(v), straight from the determinant definition."""
    b = len(v)
    return [F.dot(phi(F, v, unit(b, j)), x) for j in range(b) if j != pivot(v)]


def normalize(F: RefField, v):
    c = F.inv(v[pivot(v)])
    return tuple(F.mul(c, a) for a in v)


def rref(F: RefField, rows):
    M = [list(r) for r in rows]
    r = 0
    ncols = len(M[0]) if M else 0
    for c in range(ncols):
        p = next((k for k in range(r, len(M)) if M[k][c]), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        s = F.inv(M[r][c])
        M[r] = [F.mul(s, a) for a in M[r]]
        for k in range(len(M)):
            if k != r and M[k][c]:
                f = M[k][c]
                M[k] = [F.sub(a, F.mul(f, b)) for a, b in zip(M[k], M[r])]
        r += 1
    return M, r


def rank(F: RefField, rows):
    rows = [list(r) for r in rows]
    return rref(F, rows)[1] if rows else 0


def solve(F: RefField, A, w):
    """Unique solution of A x = w, or None if not unique or inconsistent."""
    aug = [list(r) + [c] for r, c in zip(A, w)]
    M, r = rref(F, aug)
    n = len(A[0])
    if any(all(a == 0 for a in row[:n]) and row[n] for row in M):
        return None
    if rank(F, A) != n:
        return None
    x = [0] * n
    for row in M[:r]:
        c = next(i for i in range(n) if row[i])
        x[c] = row[n]
    return x


def all_normalized(F: RefField, b):
    out = []
    for v in itertools.product(range(F.q), repeat=b):
        if any(v) and v[pivot(v)] == 1:
            out.append(tuple(v))
    return out


def min_distance(F: RefField, G):
    """Minimum weight of mG over all nonzero messages m."""
    k, n = len(G), len(G[0])
    best = n + 1
    for m in itertools.product(range(F.q), repeat=k):
        if not any(m):
            continue
        cw = [F.dot(m, [G[r][c] for r in range(k)]) for c in range(n)]
        best = min(best, sum(1 for a in cw if a))
    return best


def resilient(F: RefField, vectors, t):
    b = len(vectors[0])
    for T in itertools.combinations(range(len(vectors)), t):
        keep = [v for i, v in enumerate(vectors) if i not in T]
        if rank(F, keep) < b:
            return False
    return True

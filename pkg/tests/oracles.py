"""Brute-force reference computations.

Each oracle here is deliberately naive and shares no code path with the
library routine it checks (no LLL, no LDL enumeration, no backtracking).
"""

from fractions import Fraction
from itertools import product
from math import isqrt


def cofactor_det(M):
    n = len(M)
    if n == 1:
        return M[0][0]
    return sum((-1) ** j * M[0][j] * cofactor_det([row[:j] + row[j + 1:] for row in M[1:]]) for j in range(n))


def cofactor_inverse_diag(G):
    """Diagonal of G^{-1} via cofactors."""
    d = Fraction(cofactor_det(G))
    n = len(G)
    out = []
    for i in range(n):
        minor = [row[:i] + row[i + 1:] for k, row in enumerate(G) if k != i]
        out.append(Fraction(cofactor_det(minor)) / d)
    return out


def box_bounds(G, m):
    """|x_i| <= sqrt(2m (G^{-1})_ii) for every x with x G x^t / 2 <= m."""
    inv = cofactor_inverse_diag([list(r) for r in G])
    out = []
    for c in inv:
        v = 2 * m * c
        out.append(isqrt(v.numerator // v.denominator) + 1)
    return out


def qnorm(G, v):
    n = len(v)
    return sum(v[i] * G[i][j] * v[j] for i in range(n) for j in range(n)) // 2


def box_vectors(G, m):
    b = box_bounds(G, m)
    return [v for v in product(*(range(-k, k + 1) for k in b)) if qnorm(G, v) <= m]


def brute_rep(G, m):
    return sum(1 for v in box_vectors(G, m) if qnorm(G, v) == m)


def three_squares(n):
    r = isqrt(n)
    return sum(1 for x, y, z in product(range(-r, r + 1), repeat=3) if x * x + y * y + z * z == n)


def brute_isometries(G1, G2):
    """All integer T with T^t G1 T = G2, by exhausting box candidates per column."""
    cols = []
    for j in range(3):
        target = G2[j][j]
        cols.append([v for v in box_vectors(G1, target // 2) if 2 * qnorm(G1, v) == target])
    out = []
    pair = lambda u, v: sum(u[i] * G1[i][k] * v[k] for i in range(3) for k in range(3))  # noqa: E731
    for c0, c1, c2 in product(*cols):
        c = (c0, c1, c2)
        if all(pair(c[i], c[k]) == G2[i][k] for i in range(3) for k in range(3)):
            out.append([[c[k][i] for k in range(3)] for i in range(3)])
    return out


def _sq_mod(M, odd_only=False):
    return {z * z % M for z in range(1 if odd_only else 0, M, 2 if odd_only else 1)}


def brute_hilbert(a, b, p):
    """Primitive solvability of z^2 = a x^2 + b y^2 modulo 64 (p = 2) or p^3 (odd p).

    Only valid for squarefree a, b.
    """
    M = 64 if p == 2 else p ** 3
    squares = _sq_mod(M)
    units = {z * z % M for z in range(M) if z % p}
    for x in range(M):
        for y in range(M):
            v = (a * x * x + b * y * y) % M
            if x % p or y % p:
                if v in squares:
                    return 1
            elif v in units:
                return 1
    return -1


def squarefree_part(n):
    s = -1 if n < 0 else 1
    n = abs(n)
    r, p = 1, 2
    while n > 1:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if e % 2:
            r *= p
        p += 1
    return s * r

"""Kneser p-neighbors of even ternary lattices at odd primes of good reduction."""

from __future__ import annotations

from itertools import product

from sympy import isprime

from ..exactlinalg import congruence, hnf, kernel_mod, lll_reduce, vecmat
from .lattice import TernaryLattice, as_gram


def isotropic_lines(L: TernaryLattice, p: int) -> list[tuple[int, ...]]:
    """Normalized representatives (first nonzero entry 1) of lines with ``Q(x) = 0 mod p``."""
    out = []
    for lead in range(3):
        for tail in product(range(p), repeat=2 - lead):
            x = (0,) * lead + (1,) + tail
            if L.norm(x) % p == 0:
                out.append(x)
    return out


def _check_prime(L: TernaryLattice, p: int) -> None:
    if not isprime(p):
        raise ValueError(f"{p} is not prime")
    if p == 2:
        raise ValueError("p = 2 neighbors are not supported; use an odd prime")
    if L.det % p == 0:
        raise ValueError(f"p = {p} divides det = {L.det}")


def neighbor(L: TernaryLattice, x: tuple[int, ...], p: int) -> TernaryLattice:
    """The p-neighbor ``L_x + Z x/p`` for an isotropic ``x`` (mod p)."""
    G = L.gram
    x = list(x)
    if L.norm(x) % p:
        raise ValueError("x is not isotropic mod p")
    if L.norm(x) % (p * p):
        xG = vecmat(x, G)
        i = next(i for i in range(3) if xG[i] % p)
        t = (-(L.norm(x) // p) * pow(xG[i], -1, p)) % p
        x[i] += p * t
    xG = [int(c) for c in vecmat(x, G)]
    Lx = kernel_mod(xG, p)
    B = hnf([[p * c for c in row] for row in Lx] + [x])
    NG = congruence(B, G)
    p2 = p * p
    if any(c % p2 for row in NG for c in row):
        raise ArithmeticError("neighbor is not integral")
    gram = [[c // p2 for c in row] for row in NG]
    return TernaryLattice(as_gram(gram), L.definite)


def reduced(L: TernaryLattice) -> TernaryLattice:
    """LLL-reduced representative, with the diagonal sorted and signs normalized.

    Used as a cheap dedup key; the isometry test is the final word.
    """
    if not L.definite:
        return L
    _, R = lll_reduce(L.gram)
    order = sorted(range(3), key=lambda i: (R[i][i], i))
    P = [[int(j == order[i]) for j in range(3)] for i in range(3)]
    R = congruence(P, R)
    # make the off-diagonal entries (0,1) and (0,2) nonnegative by flipping basis signs
    s = [1, 1, 1]
    if R[0][1] < 0:
        s[1] = -1
    if R[0][2] < 0:
        s[2] = -1
    S = [[s[i] * int(i == j) for j in range(3)] for i in range(3)]
    return TernaryLattice(as_gram(congruence(S, R)), True)


def p_neighbors(L: TernaryLattice, p: int) -> list[TernaryLattice]:
    """All p-neighbors, reduced and deduplicated by Gram, in sorted Gram order."""
    _check_prime(L, p)
    seen = {}
    for x in isotropic_lines(L, p):
        N = reduced(neighbor(L, x, p))
        seen.setdefault(N.gram, N)
    return [seen[g] for g in sorted(seen)]

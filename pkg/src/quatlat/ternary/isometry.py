"""Automorphism groups and isometry tests by backtracking over short vectors."""

from __future__ import annotations

from collections import defaultdict
from functools import lru_cache
from typing import Iterator, Optional

from ..exactlinalg import invert, lll_reduce, matmul, transpose
from .enumeration import _enumerate, theta_series
from .lattice import Gram, TernaryLattice, as_gram


def _pair(g: Gram, u, v) -> int:
    return sum(u[i] * g[i][j] * v[j] for i in range(3) for j in range(3))


def _maps(G1: Gram, G2: Gram) -> Iterator[list[tuple[int, ...]]]:
    """Columns ``t_0, t_1, t_2`` (coordinates in ``G1``) with ``t_i G1 t_j = G2[i][j]``."""
    wanted = {G2[j][j] for j in range(3)}
    bound = max(wanted) // 2
    by_norm: dict[int, list[tuple[int, ...]]] = defaultdict(list)
    for v in _enumerate(G1, bound):
        n = _pair(G1, v, v)
        if n in wanted:
            by_norm[n].append(v)
    # backtrack: column j must pair correctly with all earlier columns
    cols: list[tuple[int, ...]] = []

    def rec(j: int):
        for v in by_norm.get(G2[j][j], ()):
            if all(_pair(G1, cols[i], v) == G2[i][j] for i in range(j)):
                cols.append(v)
                if j == 2:
                    yield list(cols)
                else:
                    yield from rec(j + 1)
                cols.pop()

    yield from rec(0)


def _reduced(L: TernaryLattice) -> tuple[list[list[int]], Gram]:
    T, R = lll_reduce(L.gram)
    return T, as_gram(R)


@lru_cache(maxsize=None)
def _automorphisms_of_gram(G: Gram) -> tuple[tuple[tuple[int, ...], ...], ...]:
    T, R = lll_reduce(G)
    R = as_gram(R)
    Tinv = invert(T)
    out = []
    for cols in _maps(R, R):
        S = transpose([list(c) for c in cols])
        # back to the original basis: T^t S T^{-t}
        M = matmul(matmul(transpose(T), S), transpose(Tinv))
        out.append(tuple(tuple(int(x) for x in row) for row in M))
    return tuple(sorted(out))


def automorphisms(L: TernaryLattice) -> list[list[list[int]]]:
    """All integral ``T`` with ``T^t G T = G`` (full orthogonal group, including ``-I``)."""
    return [[list(r) for r in M] for M in _automorphisms_of_gram(L.gram)]


def aut_group_order(L: TernaryLattice) -> int:
    if not L.definite:
        raise ValueError("automorphism group of an indefinite lattice is infinite")
    return len(_automorphisms_of_gram(L.gram))


def fingerprint(L: TernaryLattice, depth: Optional[int] = None) -> tuple:
    """Isometry invariant: determinant and theta coefficients up to ``depth``."""
    if depth is None:
        _, R = _reduced(L)
        depth = max(R[i][i] for i in range(3)) // 2
    return (L.det, tuple(theta_series(L, depth)))


def is_isometric(L1: TernaryLattice, L2: TernaryLattice) -> Optional[list[list[int]]]:
    """An integral ``T`` with ``T^t G1 T = G2``, or ``None`` if the lattices are not isometric."""
    if L1.det != L2.det:
        return None
    if L1.gram == L2.gram:
        return [[int(i == j) for j in range(3)] for i in range(3)]
    U1, R1 = _reduced(L1)
    U2, R2 = _reduced(L2)
    depth = max(max(R1[i][i] for i in range(3)), max(R2[i][i] for i in range(3))) // 2
    if theta_series(L1, depth) != theta_series(L2, depth):
        return None
    for cols in _maps(R1, R2):
        S = transpose([list(c) for c in cols])
        # G1r = U1 G1 U1^t, G2r = U2 G2 U2^t, S^t G1r S = G2r  =>  T = U1^t S U2^{-t}
        T = matmul(matmul(transpose(U1), S), transpose(invert(U2)))
        T = [[int(x) for x in row] for row in T]
        return T
    return None

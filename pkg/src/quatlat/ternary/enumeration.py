"""Short vector enumeration and theta coefficients for definite ternary lattices."""

from __future__ import annotations

import threading
from fractions import Fraction
from math import isqrt
from typing import Iterator

from ..exactlinalg import lll_reduce, vecmat
from .lattice import Gram, TernaryLattice


class IndefiniteLatticeError(ValueError):
    pass


def _require_definite(L: TernaryLattice) -> None:
    if not L.definite:
        raise IndefiniteLatticeError(
            "representation counts of an indefinite lattice are infinite; use the Heegner degree route"
        )


def _ldl(gram: Gram) -> tuple[list[Fraction], list[list[Fraction]]]:
    """``Q(x) = sum_i d_i (x_i + sum_{j>i} m_ij x_j)^2`` for ``Q = x G x^t / 2``."""
    n = len(gram)
    A = [[Fraction(gram[i][j], 2) for j in range(n)] for i in range(n)]
    d = [Fraction(0)] * n
    m = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        d[i] = A[i][i] - sum(d[k] * m[k][i] ** 2 for k in range(i))
        for j in range(i + 1, n):
            m[i][j] = (A[i][j] - sum(d[k] * m[k][i] * m[k][j] for k in range(i))) / d[i]
    return d, m


def _floor_sqrt(r: Fraction) -> int:
    return isqrt(r.numerator * r.denominator) // r.denominator


def _enumerate(gram: Gram, bound: int) -> Iterator[tuple[int, ...]]:
    """All integer vectors ``x`` with ``x G x^t / 2 <= bound``."""
    d, m = _ldl(gram)
    n = len(gram)
    x = [0] * n

    def rec(i: int, remaining: Fraction):
        c = sum((m[i][j] * x[j] for j in range(i + 1, n)), Fraction(0))
        s = _floor_sqrt(remaining / d[i])
        centre = -c
        lo = centre.__floor__() - s - 1
        hi = centre.__ceil__() + s + 1
        for xi in range(lo, hi + 1):
            t = xi + c
            rest = remaining - d[i] * t * t
            if rest < 0:
                continue
            x[i] = xi
            if i == 0:
                yield tuple(x)
            else:
                yield from rec(i - 1, rest)
        x[i] = 0

    yield from rec(n - 1, Fraction(bound))


def short_vectors(L: TernaryLattice, bound: int, pairs: bool = False) -> list[tuple[tuple[int, ...], int]]:
    """Vectors of norm ``Q <= bound`` as ``(coords, norm)``, sorted by norm then coordinates.

    With ``pairs=True`` only the member of each ``±`` pair whose first nonzero
    coordinate is positive is kept (the zero vector is always included).
    """
    _require_definite(L)
    if bound < 0:
        return []
    T, R = lll_reduce(L.gram)
    out = []
    for y in _enumerate(tuple(tuple(r) for r in R), bound):  # type: ignore[arg-type]
        v = tuple(int(c) for c in vecmat(list(y), T))
        if pairs:
            lead = next((c for c in v if c), 0)
            if lead < 0:
                continue
        out.append((v, L.norm(v)))
    out.sort(key=lambda t: (t[1], t[0]))
    return out


_theta_cache: dict[Gram, list[int]] = {}
_theta_lock = threading.Lock()


def theta_series(L: TernaryLattice, M: int) -> list[int]:
    """``[r_L(0), ..., r_L(M)]``, memoised per Gram matrix."""
    _require_definite(L)
    with _theta_lock:
        cached = _theta_cache.get(L.gram)
    if cached is not None and len(cached) > M:
        return cached[: M + 1]
    counts = [0] * (M + 1)
    T, R = lll_reduce(L.gram)
    Rg = tuple(tuple(r) for r in R)
    for y in _enumerate(Rg, M):  # type: ignore[arg-type]
        counts[_norm(Rg, y)] += 1
    with _theta_lock:
        prev = _theta_cache.get(L.gram)
        if prev is None or len(prev) < len(counts):
            _theta_cache[L.gram] = counts
    return counts[:]


def _norm(g, v) -> int:
    n = len(v)
    return sum(v[i] * g[i][j] * v[j] for i in range(n) for j in range(n)) // 2


def rep_number(L: TernaryLattice, m: int) -> int:
    """Number of ``x`` in ``L`` with ``Q(x) = m``."""
    if m < 0:
        return 0
    return theta_series(L, m)[m]

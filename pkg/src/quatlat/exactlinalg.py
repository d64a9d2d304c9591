"""Exact integer and rational linear algebra.

Matrices are plain lists of rows.  Integer matrices hold ``int`` entries and
rational matrices hold ``fractions.Fraction`` entries; nothing in here ever
produces a float.  Row conventions are used throughout: a lattice basis is the
list of its rows, and a Gram matrix transforms as ``T * G * T^t``.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence, Union

Number = Union[int, Fraction]
Matrix = list[list[Number]]


class SingularMatrixError(ValueError):
    pass


class NotPositiveDefiniteError(ValueError):
    pass


def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(A: Sequence[Sequence[Number]]) -> Matrix:
    return [list(col) for col in zip(*A)]


def matmul(A: Sequence[Sequence[Number]], B: Sequence[Sequence[Number]]) -> Matrix:
    Bt = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def vecmat(v: Sequence[Number], A: Sequence[Sequence[Number]]) -> list[Number]:
    """Row vector times matrix."""
    return [sum(x * A[i][j] for i, x in enumerate(v)) for j in range(len(A[0]))]


def congruence(T: Sequence[Sequence[Number]], G: Sequence[Sequence[Number]]) -> Matrix:
    """Return ``T * G * T^t``."""
    return matmul(matmul(T, G), transpose(T))


def _check_rectangular(M: Sequence[Sequence[Number]]) -> tuple[int, int]:
    rows = len(M)
    if rows == 0:
        return 0, 0
    cols = len(M[0])
    if any(len(r) != cols for r in M):
        raise ValueError("ragged matrix")
    return rows, cols


def hnf(M: Sequence[Sequence[int]]) -> list[list[int]]:
    """Row-style Hermite normal form.

    The result is upper triangular (in echelon sense) with positive pivots,
    entries above each pivot reduced into ``[0, pivot)``, and zero rows
    dropped.  It spans the same Z-module as the rows of ``M``.
    """
    rows, cols = _check_rectangular(M)
    A = [[int(x) for x in row] for row in M]
    r = 0
    for c in range(cols):
        if r == rows:
            break
        while True:
            nz = [i for i in range(r, rows) if A[i][c] != 0]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(A[i][c]))
            A[r], A[piv] = A[piv], A[r]
            clean = True
            for i in range(r + 1, rows):
                if A[i][c]:
                    q = A[i][c] // A[r][c]
                    A[i] = [x - q * y for x, y in zip(A[i], A[r])]
                    if A[i][c]:
                        clean = False
            if clean:
                break
        if r >= rows or A[r][c] == 0:
            continue
        if A[r][c] < 0:
            A[r] = [-x for x in A[r]]
        p = A[r][c]
        for i in range(r):
            q = A[i][c] // p
            if q:
                A[i] = [x - q * y for x, y in zip(A[i], A[r])]
        r += 1
    return A[:r]


def det(M: Sequence[Sequence[Number]]) -> Number:
    """Exact determinant; Bareiss for integer input, Gaussian elimination otherwise."""
    n, cols = _check_rectangular(M)
    if n != cols:
        raise ValueError(f"determinant of non-square {n}x{cols} matrix")
    if n == 0:
        return 1
    if all(isinstance(x, int) for row in M for x in row):
        return _bareiss(M)
    A = [[Fraction(x) for x in row] for row in M]
    sign = 1
    result = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if A[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            sign = -sign
        result *= A[c][c]
        for i in range(c + 1, n):
            f = A[i][c] / A[c][c]
            if f:
                A[i] = [x - f * y for x, y in zip(A[i], A[c])]
    return sign * result


def _bareiss(M: Sequence[Sequence[int]]) -> int:
    n = len(M)
    A = [list(row) for row in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if A[i][k] != 0), None)
            if swap is None:
                return 0
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def invert(M: Sequence[Sequence[Number]]) -> list[list[Fraction]]:
    """Exact inverse by Gauss-Jordan elimination over the rationals."""
    n, cols = _check_rectangular(M)
    if n != cols:
        raise ValueError("cannot invert a non-square matrix")
    A = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(M)]
    for c in range(n):
        piv = next((i for i in range(c, n) if A[i][c] != 0), None)
        if piv is None:
            raise SingularMatrixError("matrix is singular")
        A[c], A[piv] = A[piv], A[c]
        p = A[c][c]
        A[c] = [x / p for x in A[c]]
        for i in range(n):
            if i != c and A[i][c]:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[c])]
    return [row[n:] for row in A]


def clear_denominators(v: Sequence[Number]) -> tuple[list[int], int]:
    """Return ``(w, d)`` with ``w = d * v`` integral and ``d > 0`` minimal."""
    d = 1
    for x in v:
        den = Fraction(x).denominator
        d = d * den // gcd(d, den)
    return [int(Fraction(x) * d) for x in v], d


def kernel_basis_over_Z(f: Sequence[Number]) -> list[list[int]]:
    """HNF basis of ``{x in Z^n : sum f_i x_i = 0}``.

    ``f`` lists the values of a linear functional on the standard basis;
    rational values are scaled to integers first.
    """
    coeffs, _ = clear_denominators(f)
    n = len(coeffs)
    aug = [[c] + [int(i == j) for j in range(n)] for i, c in enumerate(coeffs)]
    H = hnf(aug)
    kernel = [row[1:] for row in H if row[0] == 0]
    return hnf(kernel)


def kernel_mod(f: Sequence[int], modulus: int) -> list[list[int]]:
    """HNF basis of ``{x in Z^n : sum f_i x_i = 0 mod modulus}``."""
    n = len(f)
    K = kernel_basis_over_Z(list(f) + [modulus])
    return hnf([row[:n] for row in K])


def solve_left(v: Sequence[Number], B: Sequence[Sequence[Number]]) -> list[Fraction]:
    """Coordinates ``c`` with ``c * B = v`` for square invertible ``B``."""
    return [Fraction(x) for x in vecmat(v, invert(B))]


def leading_minors(G: Sequence[Sequence[Number]]) -> list[Number]:
    return [det([row[:k] for row in G[:k]]) for k in range(1, len(G) + 1)]


def is_positive_definite(G: Sequence[Sequence[Number]]) -> bool:
    return all(m > 0 for m in leading_minors(G))


def round_half_up(x: Fraction) -> int:
    """Nearest integer, ties rounded up; exact for rationals."""
    return (2 * x.numerator + x.denominator) // (2 * x.denominator)


def gram_schmidt(G: Sequence[Sequence[Number]]) -> tuple[list[list[Fraction]], list[Fraction]]:
    """Gram-Schmidt data ``(mu, bstar_norms)`` computed from a Gram matrix."""
    n = len(G)
    mu = [[Fraction(0)] * n for _ in range(n)]
    bstar = [Fraction(0)] * n
    for i in range(n):
        for j in range(i):
            s = Fraction(G[i][j]) - sum(mu[j][k] * mu[i][k] * bstar[k] for k in range(j))
            mu[i][j] = s / bstar[j]
        mu[i][i] = Fraction(1)
        bstar[i] = Fraction(G[i][i]) - sum(mu[i][k] ** 2 * bstar[k] for k in range(i))
    return mu, bstar


def lll_reduce(gram: Sequence[Sequence[int]], delta: Fraction = Fraction(3, 4)):
    """LLL-reduce a positive definite Gram matrix.

    Returns ``(T, reduced)`` where ``T`` is unimodular and
    ``reduced == T * gram * T^t``.
    """
    G0 = [[int(x) for x in row] for row in gram]
    if not is_positive_definite(G0):
        raise NotPositiveDefiniteError("Gram matrix is not positive definite")
    n = len(G0)
    T = identity(n)
    G = [row[:] for row in G0]
    k = 1
    while k < n:
        mu, _ = gram_schmidt(G)
        for j in range(k - 1, -1, -1):
            q = round_half_up(mu[k][j])
            if q:
                T[k] = [a - q * b for a, b in zip(T[k], T[j])]
                G = congruence(T, G0)
                mu, _ = gram_schmidt(G)
        _, bstar = gram_schmidt(G)
        if bstar[k] >= (delta - mu[k][k - 1] ** 2) * bstar[k - 1]:
            k += 1
        else:
            T[k], T[k - 1] = T[k - 1], T[k]
            G = congruence(T, G0)
            k = max(k - 1, 1)
    return T, G

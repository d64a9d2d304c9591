"""Genus enumeration by neighbor closure, masses and genus-averaged counts."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from sympy import nextprime

from ..quatalg import hilbert_symbol
from .enumeration import _require_definite, theta_series
from .isometry import aut_group_order, fingerprint, is_isometric
from .lattice import TernaryLattice
from .neighbors import p_neighbors, reduced


@dataclass(frozen=True)
class QSeries:
    """Truncated q-expansion with exact coefficients for ``0 <= m <= M``."""

    coefficients: tuple[Fraction, ...]

    @property
    def precision(self) -> int:
        return len(self.coefficients) - 1

    def __getitem__(self, m: int) -> Fraction:
        return self.coefficients[m]

    def __str__(self) -> str:
        terms = []
        for m, c in enumerate(self.coefficients):
            if c == 0:
                continue
            mono = "" if m == 0 else ("q" if m == 1 else f"q^{m}")
            coef = str(c)
            if mono and c == 1:
                coef = ""
            elif mono and ("/" in coef):
                coef = f"({coef})"
            terms.append(coef + mono if coef else mono)
        return " + ".join(terms) if terms else "0"


@dataclass
class GenusData:
    classes: list[TernaryLattice]
    aut_orders: list[int]
    mass: Fraction
    neighbor_primes: tuple[int, ...]
    tag: Optional[tuple[int, int]] = None
    _theta: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def class_number(self) -> int:
        return len(self.classes)

    def recomputed_mass(self) -> Fraction:
        return sum((Fraction(1, a) for a in self.aut_orders), Fraction(0))


def admissible_primes(det: int, count: int, start: int = 2) -> list[int]:
    """The first ``count`` odd primes >= ``start`` not dividing ``det``."""
    out = []
    p = max(start, 3) - 1
    while len(out) < count:
        p = nextprime(p)
        if det % p:
            out.append(p)
    return out


def _find_class(L: TernaryLattice, classes: Sequence[TernaryLattice], prints: Sequence[tuple]) -> Optional[int]:
    fp = fingerprint(L)
    for idx, (C, cfp) in enumerate(zip(classes, prints)):
        if C.gram == L.gram:
            return idx
    for idx, (C, cfp) in enumerate(zip(classes, prints)):
        if cfp[0] == fp[0] and _same_prefix(cfp[1], fp[1]) and is_isometric(C, L) is not None:
            return idx
    return None


def _same_prefix(a: tuple, b: tuple) -> bool:
    n = min(len(a), len(b))
    return a[:n] == b[:n]


def genus(L: TernaryLattice, neighbor_primes: Sequence[int], tag: Optional[tuple[int, int]] = None) -> GenusData:
    """Close ``{L}`` under p-neighbor steps at every given prime, up to isometry."""
    _require_definite(L)
    primes = tuple(neighbor_primes)
    if not primes:
        raise ValueError("at least one neighbor prime is required")
    start = reduced(L)
    classes = [start]
    prints = [fingerprint(start)]
    queue = [start]
    while queue:
        cur = queue.pop(0)
        for p in primes:
            for nb in p_neighbors(cur, p):
                if _find_class(nb, classes, prints) is None:
                    classes.append(nb)
                    prints.append(fingerprint(nb))
                    queue.append(nb)
    auts = [aut_group_order(C) for C in classes]
    mass = sum((Fraction(1, a) for a in auts), Fraction(0))
    return GenusData(classes, auts, mass, primes, tag)


def closed_under(G: GenusData, p: int) -> bool:
    """True if every p-neighbor of every class is isometric to a listed class."""
    prints = [fingerprint(C) for C in G.classes]
    return all(
        _find_class(nb, G.classes, prints) is not None for C in G.classes for nb in p_neighbors(C, p)
    )


def genus_avg_rep(G: GenusData, m: int) -> Fraction:
    """Mass-weighted average of ``r_{L_i}(m)`` over the classes of the genus."""
    total = sum((Fraction(theta_series(C, m)[m], a) for C, a in zip(G.classes, G.aut_orders)), Fraction(0))
    return total / G.mass


def theta_coeffs(L: TernaryLattice, M: int) -> QSeries:
    return QSeries(tuple(Fraction(c) for c in theta_series(L, M)))


def genus_theta_coeffs(G: GenusData, M: int) -> QSeries:
    series = [theta_series(C, M) for C in G.classes]
    coeffs = []
    for m in range(M + 1):
        s = sum((Fraction(t[m], a) for t, a in zip(series, G.aut_orders)), Fraction(0))
        coeffs.append(s / G.mass)
    return QSeries(tuple(coeffs))


def diagonalize(L: TernaryLattice) -> list[Fraction]:
    """Diagonal entries of an orthogonal basis of ``L ⊗ Q`` for the form ``Q``."""
    n = 3
    A = [[Fraction(L.gram[i][j], 2) for j in range(n)] for i in range(n)]
    diag = []
    for i in range(n):
        if A[i][i] == 0:
            j = next((j for j in range(i + 1, n) if A[i][j] != 0), None)
            if j is None:
                diag.append(Fraction(0))
                continue
            # replace e_i by e_i + e_j so the pivot is nonzero
            for k in range(n):
                A[i][k] += A[j][k]
            for k in range(n):
                A[k][i] += A[k][j]
        piv = A[i][i]
        diag.append(piv)
        for r in range(i + 1, n):
            f = A[r][i] / piv
            for k in range(n):
                A[r][k] -= f * A[i][k]
            for k in range(n):
                A[k][r] -= f * A[k][i]
    return diag


def hasse_invariant(L: TernaryLattice, p) -> int:
    """Hasse-Witt invariant ``prod_{i<j} (a_i, a_j)_p`` of the rational form."""
    d = diagonalize(L)
    s = 1
    for i in range(3):
        for j in range(i + 1, 3):
            s *= hilbert_symbol(d[i], d[j], p)
    return s

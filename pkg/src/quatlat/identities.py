"""Genus-averaged representation numbers, normalized Heegner degrees, and the
matching identities relating them.

``r_{D,N}(m)`` means the genus average of representation numbers of the
trace-zero lattice of an Eichler order of level ``N`` when ``D`` has an odd
number of prime factors (definite case).  When ``D`` has an even number of
prime factors it is the normalized Heegner degree, which is obtained here by
reducing to two definite spaces of discriminant ``D/p``:

    r_{D,N}(m) = -2/(p-1) r_{D/p,N}(m) + (p+1)/(p-1) r_{D/p,Np}(m).
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd
from pathlib import Path
from typing import Optional, Union

from sympy import isprime, primefactors

from . import storage
from .errors import ParameterError
from .orders import eichler_order, maximalize, standard_order, trace_zero_lattice
from .quatalg import algebra_with_discriminant, is_squarefree, omega
from .ternary.genus import GenusData, admissible_primes, genus, genus_theta_coeffs
from .ternary.lattice import TernaryLattice

NO_SIEGEL_WEIL = (
    "D = 1 is excluded: the trace-zero space of M_2(Q) is isotropic, so its theta integral "
    "needs a regularized Siegel-Weil formula whose coefficients are not these numbers"
)


@dataclass(frozen=True)
class SpaceTag:
    D: int
    N: int = 1

    def __post_init__(self):
        check_space(self.D, self.N)

    @property
    def definite(self) -> bool:
        return omega(self.D) % 2 == 1


def check_space(D: int, N: int) -> None:
    if D == 1:
        raise ParameterError(NO_SIEGEL_WEIL)
    if not isinstance(D, int) or not is_squarefree(D):
        raise ParameterError(f"D = {D} must be a squarefree positive integer")
    if not isinstance(N, int) or N < 1:
        raise ParameterError(f"N = {N} must be a positive integer")
    if gcd(D, N) != 1:
        raise ParameterError(f"N = {N} must be coprime to D = {D}")


@lru_cache(maxsize=None)
def lattice(D: int, N: int = 1) -> TernaryLattice:
    """``L_D(N)``: trace-zero part of an Eichler order of level ``N`` in ``B(D)``."""
    check_space(D, N)
    Omax = maximalize(standard_order(algebra_with_discriminant(D)))
    return trace_zero_lattice(eichler_order(Omax, N))


class GenusCache:
    """Memo table of genera keyed by ``(D, N)``, optionally backed by a directory.

    Construction of a given key happens at most once per process; the first
    result stored wins.
    """

    def __init__(self, directory: Union[str, Path, None] = None, neighbor_primes: Optional[tuple[int, ...]] = None):
        self.directory = Path(directory) if directory else None
        self.neighbor_primes = tuple(neighbor_primes) if neighbor_primes else None
        self._data: dict[tuple[int, int], GenusData] = {}
        self._lock = threading.Lock()
        self._key_locks: dict[tuple[int, int], threading.Lock] = {}

    def _primes_for(self, L: TernaryLattice) -> tuple[int, ...]:
        if self.neighbor_primes:
            usable = tuple(p for p in self.neighbor_primes if p != 2 and L.det % p)
            if len(usable) >= 1:
                return usable
        return tuple(admissible_primes(L.det, 2))

    def get(self, D: int, N: int) -> GenusData:
        key = (D, N)
        with self._lock:
            if key in self._data:
                return self._data[key]
            klock = self._key_locks.setdefault(key, threading.Lock())
        with klock:
            with self._lock:
                if key in self._data:
                    return self._data[key]
            G = None
            if self.directory is not None:
                G = storage.load_genus(self.directory, D, N)
            if G is None:
                L = lattice(D, N)
                G = genus(L, self._primes_for(L), tag=key)
                if self.directory is not None:
                    storage.save_genus(G, self.directory)
            with self._lock:
                return self._data.setdefault(key, G)

    def __contains__(self, key) -> bool:
        return key in self._data

    def items(self):
        with self._lock:
            return list(self._data.items())


_default_cache = GenusCache()


def default_cache() -> GenusCache:
    return _default_cache


def _cache(cache: Optional[GenusCache]) -> GenusCache:
    return cache if cache is not None else _default_cache


def matching_weights(p: int) -> tuple[Fraction, Fraction]:
    """``(-2/(p-1), (p+1)/(p-1))``; the two weights sum to 1."""
    if not isprime(p):
        raise ParameterError(f"{p} is not prime")
    return Fraction(-2, p - 1), Fraction(p + 1, p - 1)


def volume(D: int, N: int = 1) -> Fraction:
    """``DN/6 * prod_{p|N} (1 + 1/p) * prod_{p|D} (1 - 1/p)``."""
    if not is_squarefree(D):
        raise ParameterError(f"D = {D} must be squarefree")
    if N < 1 or gcd(D, N) != 1:
        raise ParameterError(f"N = {N} must be a positive integer coprime to D = {D}")
    v = Fraction(D * N, 6)
    for p in primefactors(N):
        v *= Fraction(p + 1, p)
    for p in primefactors(D):
        v *= Fraction(p - 1, p)
    return v


def definite_series(D: int, N: int, M: int, cache: Optional[GenusCache] = None) -> list[Fraction]:
    """``[r_{D,N}(0), ..., r_{D,N}(M)]`` in the definite case."""
    check_space(D, N)
    if omega(D) % 2 == 0:
        raise ParameterError(
            f"B({D}) is indefinite; representation numbers are infinite, use the Heegner degree route"
        )
    G = _cache(cache).get(D, N)
    return list(genus_theta_coeffs(G, M).coefficients)


def r_definite(D: int, N: int, m: int, cache: Optional[GenusCache] = None) -> Fraction:
    return definite_series(D, N, m, cache)[m]


def default_split_prime(D: int) -> int:
    return min(primefactors(D))


def _split(D: int, split_prime: Optional[int]) -> int:
    p = default_split_prime(D) if split_prime is None else split_prime
    if D % p or not isprime(p):
        raise ParameterError(f"split prime {p} must be a prime dividing D = {D}")
    return p


def indefinite_series(
    D: int, N: int, M: int, split_prime: Optional[int] = None, cache: Optional[GenusCache] = None
) -> list[Fraction]:
    """Normalized Heegner degrees ``r_{D,N}(m)``, ``0 <= m <= M``, via definite data at ``D/p``."""
    check_space(D, N)
    if omega(D) % 2 == 1:
        raise ParameterError(f"B({D}) is definite; use r_definite")
    p = _split(D, split_prime)
    w1, w2 = matching_weights(p)
    a = definite_series(D // p, N, M, cache)
    b = definite_series(D // p, N * p, M, cache)
    return [w1 * x + w2 * y for x, y in zip(a, b)]


def r_indefinite(
    D: int, N: int, m: int, split_prime: Optional[int] = None, cache: Optional[GenusCache] = None
) -> Fraction:
    return indefinite_series(D, N, m, split_prime, cache)[m]


def r_series(D: int, N: int, M: int, cache: Optional[GenusCache] = None) -> list[Fraction]:
    """``r_{D,N}(m)`` for ``0 <= m <= M`` in whichever sense matches the parity of ``D``."""
    check_space(D, N)
    if omega(D) % 2 == 1:
        return definite_series(D, N, M, cache)
    return indefinite_series(D, N, M, None, cache)


@dataclass(frozen=True)
class HeegnerRecord:
    D: int
    N: int
    m: int
    r: Fraction
    vol: Fraction
    deg: Fraction
    split_prime: int

    @property
    def nonnegative(self) -> bool:
        return self.r >= 0 and self.deg >= 0


def heegner_degrees(
    D: int, N: int, M: int, split_prime: Optional[int] = None, cache: Optional[GenusCache] = None
) -> list[HeegnerRecord]:
    check_space(D, N)
    p = _split(D, split_prime)
    rs = indefinite_series(D, N, M, p, cache)
    vol = volume(D, N)
    return [HeegnerRecord(D, N, m, r, vol, r * vol, p) for m, r in enumerate(rs)]


def heegner_degree(
    D: int, N: int, m: int, split_prime: Optional[int] = None, cache: Optional[GenusCache] = None
) -> HeegnerRecord:
    """``deg Z_{D,N}(m) = r_{D,N}(m) * vol(X_0^D(N))``."""
    return heegner_degrees(D, N, m, split_prime, cache)[m]


# -- identity reports ------------------------------------------------------------

@dataclass(frozen=True)
class IdentityRow:
    m: int
    lhs: Fraction
    rhs: Fraction

    @property
    def equal(self) -> bool:
        return self.lhs == self.rhs


@dataclass
class IdentityReport:
    name: str
    parameters: dict
    rows: list[IdentityRow] = field(default_factory=list)
    mode: str = "direct"

    @property
    def verdict(self) -> bool:
        return all(r.equal for r in self.rows)

    def failures(self) -> list[IdentityRow]:
        return [r for r in self.rows if not r.equal]


def _check_prime_pair(D: int, p: int, q: int, N: int) -> None:
    for ell in (p, q):
        if not isprime(ell):
            raise ParameterError(f"{ell} is not prime")
        if D % ell == 0:
            raise ParameterError(f"{ell} divides D = {D}")
    if p == q:
        raise ParameterError("p and q must be different primes")
    if N < 1 or gcd(N, D * p * q) != 1:
        raise ParameterError(f"N = {N} must be a positive integer coprime to D*p*q = {D * p * q}")


def verify_thm11(D: int, p: int, q: int, N: int, m_max: int, cache: Optional[GenusCache] = None) -> IdentityReport:
    """Check -2/(q-1) r_{Dp,N} + (q+1)/(q-1) r_{Dp,Nq} = (same with p, q swapped) for m <= m_max.

    ``D = 1`` is allowed: only the algebras of discriminant ``Dp`` and ``Dq`` occur.
    """
    if D < 1 or not is_squarefree(D):
        raise ParameterError(f"D = {D} must be a squarefree positive integer")
    _check_prime_pair(D, p, q, N)
    wq1, wq2 = matching_weights(q)
    wp1, wp2 = matching_weights(p)
    a, b = r_series(D * p, N, m_max, cache), r_series(D * p, N * q, m_max, cache)
    c, d = r_series(D * q, N, m_max, cache), r_series(D * q, N * p, m_max, cache)
    rows = [IdentityRow(m, wq1 * a[m] + wq2 * b[m], wp1 * c[m] + wp2 * d[m]) for m in range(m_max + 1)]
    return IdentityReport("thm11", {"D": D, "p": p, "q": q, "N": N, "m_max": m_max}, rows)


def verify_thm13(D: int, p: int, N: int, m_max: int, cache: Optional[GenusCache] = None) -> IdentityReport:
    """Check r_{Dp,N} = -2/(p-1) r_{D,N} + (p+1)/(p-1) r_{D,Np} for m <= m_max.

    If ``Dp`` is definite the left side is a genus average and the indefinite
    ``r_{D,.}`` on the right are themselves reduced at a prime of ``D``, so
    the check is a genuine cross-parity one.  If ``Dp`` is indefinite the
    left side is *defined* by the reduction at ``p``; the report then compares
    it with the reduction at the smallest prime of ``D`` instead.
    """
    if D == 1:
        raise ParameterError(NO_SIEGEL_WEIL)
    if D < 1 or not is_squarefree(D):
        raise ParameterError(f"D = {D} must be a squarefree integer > 1")
    if not isprime(p) or D % p == 0:
        raise ParameterError(f"p = {p} must be a prime not dividing D = {D}")
    if N < 1 or gcd(N, D * p) != 1:
        raise ParameterError(f"N = {N} must be a positive integer coprime to D*p = {D * p}")
    params = {"D": D, "p": p, "N": N, "m_max": m_max}
    if omega(D) % 2 == 0:
        w1, w2 = matching_weights(p)
        lhs = definite_series(D * p, N, m_max, cache)
        a = indefinite_series(D, N, m_max, None, cache)
        b = indefinite_series(D, N * p, m_max, None, cache)
        rows = [IdentityRow(m, lhs[m], w1 * a[m] + w2 * b[m]) for m in range(m_max + 1)]
        return IdentityReport("thm13", params, rows, mode="cross-parity")
    ell = default_split_prime(D)
    lhs = indefinite_series(D * p, N, m_max, p, cache)
    rhs = indefinite_series(D * p, N, m_max, ell, cache)
    params["other_split_prime"] = ell
    rows = [IdentityRow(m, x, y) for m, (x, y) in enumerate(zip(lhs, rhs))]
    return IdentityReport("thm13", params, rows, mode="split-prime-independence")


def verify_cor12(D: int, p: int, q: int, N: int, m_max: int, cache: Optional[GenusCache] = None) -> IdentityReport:
    """Check -2 deg Z_{Dp,N}(m) + deg Z_{Dp,Nq}(m) = -2 deg Z_{Dq,N}(m) + deg Z_{Dq,Np}(m).

    Requires ``D`` with an odd number of prime factors so that ``Dp`` and ``Dq`` are indefinite.
    """
    if D < 2 or not is_squarefree(D) or omega(D) % 2 == 0:
        raise ParameterError(f"D = {D} must be squarefree with an odd number of prime factors")
    _check_prime_pair(D, p, q, N)

    def degs(E: int, level: int) -> list[Fraction]:
        return [rec.deg for rec in heegner_degrees(E, level, m_max, None, cache)]

    a, b = degs(D * p, N), degs(D * p, N * q)
    c, d = degs(D * q, N), degs(D * q, N * p)
    rows = [IdentityRow(m, -2 * a[m] + b[m], -2 * c[m] + d[m]) for m in range(m_max + 1)]
    return IdentityReport("cor12", {"D": D, "p": p, "q": q, "N": N, "m_max": m_max}, rows)

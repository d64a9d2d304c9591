"""Orders in rational quaternion algebras.

An order is stored as a Z-basis in canonical form: the rational coordinate
rows (in the basis ``1, i, j, k``) are scaled by their common denominator and
put in Hermite normal form, so two orders are equal iff their bases are.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import product
from math import gcd, isqrt
from typing import Optional, Sequence

from sympy import factorint, isprime

from .errors import InvariantError
from .exactlinalg import clear_denominators, det, hnf, invert, kernel_basis_over_Z, kernel_mod, vecmat
from .quatalg import QuatElement, QuaternionAlgebra, multiply, nrd, trace_pairing, trd
from .ternary.lattice import TernaryLattice, as_gram


class OrderError(InvariantError):
    """Raised when a construction violates an order invariant."""


def _canonical(elements: Sequence[QuatElement]) -> tuple[int, list[list[int]]]:
    den = 1
    for e in elements:
        _, d = clear_denominators(e.coords)
        den = den * d // gcd(den, d)
    H = hnf([[int(c * den) for c in e.coords] for e in elements])
    return den, H


@dataclass(frozen=True)
class QuatOrder:
    algebra: QuaternionAlgebra
    denominator: int
    hnf_basis: tuple[tuple[int, ...], ...]
    level: int = 1

    @classmethod
    def from_elements(cls, A: QuaternionAlgebra, elements: Sequence[QuatElement], level: int = 1) -> "QuatOrder":
        den, H = _canonical(elements)
        if len(H) != 4:
            raise OrderError(f"elements span a rank-{len(H)} module, not rank 4")
        # reduce the common denominator
        g = den
        for row in H:
            for x in row:
                g = gcd(g, x)
        H = [[x // g for x in row] for row in H]
        return cls(A, den // g, tuple(tuple(r) for r in H), level)

    @cached_property
    def basis(self) -> list[QuatElement]:
        return [QuatElement(*(Fraction(x, self.denominator) for x in row)) for row in self.hnf_basis]

    @cached_property
    def basis_matrix(self) -> list[list[Fraction]]:
        return [list(e.coords) for e in self.basis]

    @cached_property
    def _inverse(self) -> list[list[Fraction]]:
        return invert(self.basis_matrix)

    def coordinates(self, x: QuatElement) -> list[Fraction]:
        return [Fraction(c) for c in vecmat(x.coords, self._inverse)]

    def contains(self, x: QuatElement) -> bool:
        return all(c.denominator == 1 for c in self.coordinates(x))

    def element(self, coeffs: Sequence[int]) -> QuatElement:
        return QuatElement(*vecmat(list(coeffs), self.basis_matrix))

    @cached_property
    def structure_constants(self) -> list[list[list[int]]]:
        """``c[i][j]`` = integer coordinates of ``e_i * e_j``; raises if not closed."""
        table = []
        for u in self.basis:
            row = []
            for v in self.basis:
                c = self.coordinates(multiply(u, v, self.algebra))
                if any(x.denominator != 1 for x in c):
                    raise OrderError("basis is not closed under multiplication")
                row.append([int(x) for x in c])
            table.append(row)
        return table

    @cached_property
    def trace_vector(self) -> list[int]:
        return [int(trd(e)) for e in self.basis]

    @cached_property
    def trace_gram(self) -> list[list[Fraction]]:
        return [[trace_pairing(u, v, self.algebra) for v in self.basis] for u in self.basis]

    @cached_property
    def one_coordinates(self) -> list[int]:
        return [int(c) for c in self.coordinates(QuatElement(1))]

    @property
    def reduced_discriminant(self) -> int:
        return reduced_discriminant(self)

    def index_in(self, other: "QuatOrder") -> int:
        """``[other : self]`` for ``self`` contained in ``other``."""
        return int(abs(det([other.coordinates(e) for e in self.basis])))

    def is_order(self) -> bool:
        if not self.contains(QuatElement(1)):
            return False
        try:
            self.structure_constants
        except OrderError:
            return False
        return all(x.denominator == 1 for row in self.trace_gram for x in row) and all(
            nrd(e, self.algebra).denominator == 1 for e in self.basis
        )


def standard_order(A: QuaternionAlgebra) -> QuatOrder:
    return QuatOrder.from_elements(A, A.basis())


def reduced_discriminant(O: QuatOrder) -> int:
    d = abs(det(O.trace_gram))
    if d.denominator != 1:
        raise OrderError(f"trace-form determinant {d} is not an integer")
    d = int(d)
    r = isqrt(d)
    if r * r != d:
        raise OrderError(f"trace-form determinant {d} is not a perfect square")
    return r


def _integral_module(A: QuaternionAlgebra, elements: Sequence[QuatElement]) -> bool:
    return all(nrd(e, A).denominator == 1 for e in elements) and all(
        trace_pairing(u, v, A).denominator == 1 for u in elements for v in elements
    )


def ring_closure(A: QuaternionAlgebra, generators: Sequence[QuatElement], max_rounds: int = 64) -> Optional[QuatOrder]:
    """Smallest ring containing ``generators``, or ``None`` if it is not integral."""
    current = QuatOrder.from_elements(A, list(generators))
    for _ in range(max_rounds):
        basis = current.basis
        if not _integral_module(A, basis):
            return None
        products = [multiply(u, v, A) for u in basis for v in basis]
        nxt = QuatOrder.from_elements(A, basis + products)
        if nxt.hnf_basis == current.hnf_basis and nxt.denominator == current.denominator:
            return current
        current = nxt
    raise OrderError("ring closure did not stabilize")


def _projective_points(p: int, n: int):
    for lead in range(n):
        for tail in product(range(p), repeat=n - lead - 1):
            yield [0] * lead + [1] + list(tail)


def _enlarge_at(O: QuatOrder, p: int) -> Optional[QuatOrder]:
    A = O.algebra
    for c in _projective_points(p, 4):
        x = O.element(c).scale(Fraction(1, p))
        if trd(x).denominator != 1 or nrd(x, A).denominator != 1:
            continue
        R = ring_closure(A, O.basis + [x])
        if R is not None:
            return R
    return None


def maximalize(O: QuatOrder, max_steps: int = 200) -> QuatOrder:
    """A maximal order containing ``O`` (reduced discriminant equal to ``D``)."""
    D = O.algebra.discriminant
    for _ in range(max_steps):
        d = reduced_discriminant(O)
        if d % D:
            raise OrderError(f"reduced discriminant {d} not divisible by D = {D}")
        if d == D:
            return QuatOrder.from_elements(O.algebra, O.basis, level=1)
        progressed = False
        for p in sorted(factorint(d // D)):
            bigger = _enlarge_at(O, p)
            if bigger is not None:
                O = bigger
                progressed = True
                break
        if not progressed:
            raise OrderError(f"no enlargement found for order of discriminant {d}")
    raise OrderError("maximalization did not terminate")


# -- splitting and Eichler orders ---------------------------------------------

@dataclass(frozen=True)
class SplittingData:
    """Matrix units of ``O / p^k O`` given as integer coordinates in the order basis."""

    order: QuatOrder
    p: int
    k: int
    e11: tuple[int, ...]
    e12: tuple[int, ...]
    e21: tuple[int, ...]
    e22: tuple[int, ...]

    @property
    def modulus(self) -> int:
        return self.p ** self.k

    def check(self) -> bool:
        M = self.modulus
        mul = lambda u, v: _mul_coords(self.order, u, v, M)  # noqa: E731
        red = lambda u: tuple(x % M for x in u)  # noqa: E731
        one = red(self.order.one_coordinates)
        return (
            red(a + b for a, b in zip(self.e11, self.e22)) == one
            and mul(self.e11, self.e11) == red(self.e11)
            and mul(self.e22, self.e22) == red(self.e22)
            and mul(self.e11, self.e12) == red(self.e12)
            and mul(self.e21, self.e11) == red(self.e21)
            and mul(self.e12, self.e21) == red(self.e11)
            and mul(self.e21, self.e12) == red(self.e22)
        )


def _mul_coords(O: QuatOrder, u: Sequence[int], v: Sequence[int], M: int) -> tuple[int, ...]:
    c = O.structure_constants
    out = [0, 0, 0, 0]
    for i, ui in enumerate(u):
        if ui % M == 0:
            continue
        for j, vj in enumerate(v):
            if vj % M == 0:
                continue
            s = ui * vj
            cij = c[i][j]
            for k in range(4):
                out[k] += s * cij[k]
    return tuple(x % M for x in out)


def _trd_coords(O: QuatOrder, u: Sequence[int]) -> int:
    return sum(a * t for a, t in zip(u, O.trace_vector))


def _nrd_coords(O: QuatOrder, u: Sequence[int]) -> int:
    G = O.trace_gram
    s = sum(u[i] * u[j] * G[i][j] for i in range(4) for j in range(4))
    return int(s) // 2


def split_mod_pk(O: QuatOrder, p: int, k: int = 1) -> SplittingData:
    """Matrix units for ``O / p^k O``, an isomorphic copy of ``M_2(Z/p^k)``."""
    if not isprime(p):
        raise ValueError(f"{p} is not prime")
    if O.algebra.discriminant % p == 0:
        raise ValueError(f"p = {p} divides the discriminant; the algebra does not split there")
    if k < 1:
        raise ValueError("k must be positive")
    M = p ** k
    e = None
    for u in product(range(p), repeat=4):
        if _trd_coords(O, u) % p == 1 and _nrd_coords(O, u) % p == 0:
            e = tuple(u)
            break
    if e is None:
        raise OrderError(f"no nontrivial idempotent mod {p}; order is not maximal at {p}?")
    # Hensel lift: e -> 3e^2 - 2e^3 doubles the precision each round
    while True:
        e2 = _mul_coords(O, e, e, M)
        if e2 == tuple(x % M for x in e):
            break
        e3 = _mul_coords(O, e2, e, M)
        e = tuple((3 * a - 2 * b) % M for a, b in zip(e2, e3))
    one = O.one_coordinates
    f = tuple((a - b) % M for a, b in zip(one, e))
    basis_vecs = [tuple(int(i == j) for j in range(4)) for i in range(4)]

    e12 = None
    for b in basis_vecs:
        y = _mul_coords(O, _mul_coords(O, e, b, M), f, M)
        if any(x % p for x in y):
            e12 = y
            break
    e21 = None
    for b in basis_vecs:
        y = _mul_coords(O, _mul_coords(O, f, b, M), e, M)
        if any(x % p for x in y):
            unit = _trd_coords(O, _mul_coords(O, e12, y, M)) % M
            inv = pow(unit, -1, M)
            e21 = tuple(x * inv % M for x in y)
            break
    if e12 is None or e21 is None:
        raise OrderError("failed to complete matrix units")
    data = SplittingData(O, p, k, e, e12, e21, f)
    if not data.check():
        raise OrderError("splitting invariants violated")
    return data


def eichler_order(Omax: QuatOrder, N: int) -> QuatOrder:
    """Eichler order of level ``N`` inside the maximal order ``Omax``.

    At each ``p^k || N`` this is the preimage of the upper triangular matrices
    under ``Omax / p^k Omax = M_2(Z/p^k)``: the lower-left entry, read off as
    ``trd(e12 * x * e11)``, must vanish mod ``p^k``.
    """
    D = Omax.algebra.discriminant
    if N < 1:
        raise ValueError("level must be positive")
    if gcd(N, D) != 1:
        raise ValueError(f"level N = {N} is not coprime to D = {D}")
    if N == 1:
        return Omax
    functional = [0, 0, 0, 0]
    for p, k in sorted(factorint(N).items()):
        S = split_mod_pk(Omax, p, k)
        M = p ** k
        c = []
        for i in range(4):
            b = tuple(int(i == j) for j in range(4))
            y = _mul_coords(Omax, _mul_coords(Omax, S.e12, b, M), S.e11, M)
            c.append(_trd_coords(Omax, y) % M)
        # CRT: combine the local conditions into one functional mod N
        cof = N // M
        w = cof * pow(cof, -1, M)
        functional = [(a + w * x) % N for a, x in zip(functional, c)]
    K = kernel_mod(functional, N)
    elements = [Omax.element(row) for row in K]
    return QuatOrder.from_elements(Omax.algebra, elements, level=N)


def trace_zero_lattice(O: QuatOrder) -> TernaryLattice:
    """``O ∩ {trd = 0}`` with Gram ``trd(x_r * conj(x_s))`` (so ``Q = nrd``)."""
    K = kernel_basis_over_Z(O.trace_vector)
    xs = [O.element(row) for row in K]
    G = [[trace_pairing(u, v, O.algebra) for v in xs] for u in xs]
    if any(g.denominator != 1 for row in G for g in row):
        raise OrderError("trace-zero Gram is not integral")
    definite = O.algebra.ramified_at_infinity
    return TernaryLattice(as_gram([[int(g) for g in row] for row in G]), definite)


def trace_zero_basis(O: QuatOrder) -> list[QuatElement]:
    return [O.element(row) for row in kernel_basis_over_Z(O.trace_vector)]

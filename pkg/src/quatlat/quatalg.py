"""Rational quaternion algebras ``(a, b)_Q`` and their local invariants."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import count
from typing import Iterable, Union

from sympy import factorint, isprime, primefactors

Rational = Union[int, Fraction]
INFINITY = "inf"


def is_squarefree(n: int) -> bool:
    return n > 0 and all(e == 1 for e in factorint(n).values())


def omega(n: int) -> int:
    """Number of distinct prime factors."""
    return len(primefactors(n))


def is_definite(D: int) -> bool:
    """The algebra of discriminant ``D`` is definite iff ``D`` has an odd number of prime factors."""
    if not is_squarefree(D):
        raise ValueError(f"D = {D} is not squarefree")
    return omega(D) % 2 == 1


@dataclass(frozen=True)
class QuatElement:
    """``t + x*i + y*j + z*k`` with rational coefficients."""

    t: Fraction
    x: Fraction
    y: Fraction
    z: Fraction

    def __init__(self, t: Rational = 0, x: Rational = 0, y: Rational = 0, z: Rational = 0):
        for name, v in zip("txyz", (t, x, y, z)):
            object.__setattr__(self, name, Fraction(v))

    @classmethod
    def from_coords(cls, coords: Iterable[Rational]) -> "QuatElement":
        return cls(*coords)

    @property
    def coords(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.t, self.x, self.y, self.z)

    def __add__(self, other: "QuatElement") -> "QuatElement":
        return QuatElement(*(u + v for u, v in zip(self.coords, other.coords)))

    def __sub__(self, other: "QuatElement") -> "QuatElement":
        return QuatElement(*(u - v for u, v in zip(self.coords, other.coords)))

    def __neg__(self) -> "QuatElement":
        return QuatElement(*(-u for u in self.coords))

    def scale(self, c: Rational) -> "QuatElement":
        return QuatElement(*(c * u for u in self.coords))

    def __repr__(self) -> str:
        return "QuatElement({})".format(", ".join(str(c) for c in self.coords))


@dataclass(frozen=True)
class QuaternionAlgebra:
    """The algebra with basis ``1, i, j, k``, ``i^2 = a``, ``j^2 = b``, ``k = ij = -ji``."""

    a: int
    b: int

    def __post_init__(self):
        if self.a == 0 or self.b == 0:
            raise ValueError("structure constants must be nonzero")

    @cached_property
    def ramification(self) -> tuple[tuple[int, ...], bool]:
        return ramified_primes(self)

    @property
    def ramified_finite(self) -> tuple[int, ...]:
        return self.ramification[0]

    @property
    def ramified_at_infinity(self) -> bool:
        return self.ramification[1]

    @property
    def discriminant(self) -> int:
        d = 1
        for p in self.ramified_finite:
            d *= p
        return d

    def one(self) -> QuatElement:
        return QuatElement(1)

    def basis(self) -> list[QuatElement]:
        return [QuatElement(1), QuatElement(0, 1), QuatElement(0, 0, 1), QuatElement(0, 0, 0, 1)]

    def multiply(self, u: QuatElement, v: QuatElement) -> QuatElement:
        return multiply(u, v, self)


def multiply(u: QuatElement, v: QuatElement, A: QuaternionAlgebra) -> QuatElement:
    a, b = A.a, A.b
    t1, x1, y1, z1 = u.coords
    t2, x2, y2, z2 = v.coords
    return QuatElement(
        t1 * t2 + a * x1 * x2 + b * y1 * y2 - a * b * z1 * z2,
        t1 * x2 + x1 * t2 - b * y1 * z2 + b * z1 * y2,
        t1 * y2 + y1 * t2 + a * x1 * z2 - a * z1 * x2,
        t1 * z2 + z1 * t2 + x1 * y2 - y1 * x2,
    )


def conjugate(u: QuatElement) -> QuatElement:
    return QuatElement(u.t, -u.x, -u.y, -u.z)


def trd(u: QuatElement) -> Fraction:
    return 2 * u.t


def nrd(u: QuatElement, A: QuaternionAlgebra) -> Fraction:
    return u.t ** 2 - A.a * u.x ** 2 - A.b * u.y ** 2 + A.a * A.b * u.z ** 2


def trace_pairing(u: QuatElement, v: QuatElement, A: QuaternionAlgebra) -> Fraction:
    """``trd(u * conj(v))``; equals ``2 nrd(u)`` on the diagonal."""
    a, b = A.a, A.b
    return 2 * (u.t * v.t - a * u.x * v.x - b * u.y * v.y + a * b * u.z * v.z)


# -- Hilbert symbols ---------------------------------------------------------

def _split_valuation(n: int, p: int) -> tuple[int, int]:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v, n


def _legendre(u: int, p: int) -> int:
    r = pow(u % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else 1


def hilbert_symbol(a: Rational, b: Rational, p) -> int:
    """Local Hilbert symbol ``(a, b)_p`` for nonzero rationals; ``p`` a prime or ``"inf"``."""
    a, b = Fraction(a), Fraction(b)
    if a == 0 or b == 0:
        raise ValueError("Hilbert symbol of zero")
    # rescale by squares so both arguments are integers
    a = a.numerator * a.denominator
    b = b.numerator * b.denominator
    if p == INFINITY:
        return -1 if a < 0 and b < 0 else 1
    if not isinstance(p, int) or not isprime(p):
        raise ValueError(f"{p!r} is not a prime")
    alpha, u = _split_valuation(a, p)
    beta, v = _split_valuation(b, p)
    if p == 2:
        eps_u = ((u - 1) // 2) % 2
        eps_v = ((v - 1) // 2) % 2
        om_u = ((u * u - 1) // 8) % 2
        om_v = ((v * v - 1) // 8) % 2
        e = eps_u * eps_v + alpha * om_v + beta * om_u
        return -1 if e % 2 else 1
    s = -1 if (alpha * beta * ((p - 1) // 2)) % 2 else 1
    if beta % 2:
        s *= _legendre(u, p)
    if alpha % 2:
        s *= _legendre(v, p)
    return s


def ramified_primes(A: QuaternionAlgebra) -> tuple[tuple[int, ...], bool]:
    candidates = set(primefactors(2 * abs(A.a) * abs(A.b)))
    finite = tuple(sorted(p for p in candidates if hilbert_symbol(A.a, A.b, p) == -1))
    at_inf = hilbert_symbol(A.a, A.b, INFINITY) == -1
    return finite, at_inf


def _search_pairs():
    for s in count(2):
        pairs = [(a, s - abs(a)) for a in range(-s + 1, s) if a != 0]
        pairs += [(a, -b) for a, b in pairs]
        yield from sorted(set(pairs))


def algebra_with_discriminant(D: int, max_height: int = 10_000) -> QuaternionAlgebra:
    """First ``(a, b)`` in the fixed search order whose algebra has discriminant ``D``.

    Pairs are ordered by ``|a| + |b|`` and then lexicographically.
    """
    if D == 1:
        raise ValueError("D = 1 gives the split algebra M_2(Q); its trace-zero space is isotropic")
    if not is_squarefree(D):
        raise ValueError(f"D = {D} is not squarefree")
    want = (tuple(primefactors(D)), omega(D) % 2 == 1)
    for a, b in _search_pairs():
        if abs(a) + abs(b) > max_height:
            break
        A = QuaternionAlgebra(a, b)
        if A.ramification == want:
            return A
    raise RuntimeError(f"no algebra of discriminant {D} with |a|+|b| <= {max_height}")

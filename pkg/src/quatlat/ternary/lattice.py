from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from ..exactlinalg import det, is_positive_definite

Gram = tuple[tuple[int, int, int], tuple[int, int, int], tuple[int, int, int]]


def as_gram(rows: Sequence[Sequence[int]]) -> Gram:
    return tuple(tuple(int(x) for x in row) for row in rows)  # type: ignore[return-value]


@dataclass(frozen=True)
class TernaryLattice:
    """Rank-3 lattice given by an even integral Gram matrix.

    The quadratic form is ``Q(x) = x G x^t / 2``; representation numbers
    always count vectors by ``Q``.
    """

    gram: Gram
    definite: bool = True

    def __post_init__(self):
        g = as_gram(self.gram)
        object.__setattr__(self, "gram", g)
        if len(g) != 3 or any(len(r) != 3 for r in g):
            raise ValueError("Gram matrix must be 3x3")
        if any(g[i][j] != g[j][i] for i in range(3) for j in range(3)):
            raise ValueError("Gram matrix must be symmetric")
        if any(g[i][i] % 2 for i in range(3)):
            raise ValueError("Gram matrix must have even diagonal")
        if self.definite and not is_positive_definite(g):
            raise ValueError("lattice flagged definite but Gram is not positive definite")

    @cached_property
    def det(self) -> int:
        return det([list(r) for r in self.gram])

    def norm(self, v: Sequence[int]) -> int:
        """``Q(v)`` for an integer coordinate vector."""
        g = self.gram
        s = sum(v[i] * g[i][j] * v[j] for i in range(3) for j in range(3))
        return s // 2

    def pairing(self, u: Sequence[int], v: Sequence[int]) -> int:
        g = self.gram
        return sum(u[i] * g[i][j] * v[j] for i in range(3) for j in range(3))

    def transform(self, U: Sequence[Sequence[int]]) -> "TernaryLattice":
        """Lattice with Gram ``U * G * U^t`` (rows of ``U`` as the new basis)."""
        from ..exactlinalg import congruence

        return TernaryLattice(as_gram(congruence(U, self.gram)), self.definite)

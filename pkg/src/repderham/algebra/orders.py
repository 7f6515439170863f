"""Term orders given by integer weight matrices."""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .polynomial import PolynomialError, PolynomialRing


class OrderError(PolynomialError):
    pass


def _rank(rows: Sequence[Sequence[int]]) -> int:
    m = [[Fraction(v) for v in r] for r in rows]
    rank, ncols = 0, len(m[0]) if m else 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(m)) if m[r][col]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for r in range(len(m)):
            if r != rank and m[r][col]:
                f = m[r][col] / m[rank][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
        rank += 1
    return rank


class MonomialOrder:
    """x^a > x^b iff the first nonzero entry of ``weights @ (a - b)`` is positive."""

    def __init__(self, ring: PolynomialRing, weights: Iterable[Iterable[int]], name: str | None = None):
        self.ring = ring
        self.weights = tuple(tuple(int(v) for v in row) for row in weights)
        self.name = name or "matrix"
        n = ring.nvars
        if not self.weights or any(len(r) != n for r in self.weights):
            raise OrderError(f"weight matrix must have {n} columns")
        if _rank(self.weights) != n:
            raise OrderError("weight matrix does not have full column rank")
        for j in range(n):
            col = [r[j] for r in self.weights]
            first = next((v for v in col if v), 0)
            if first <= 0:
                raise OrderError(f"variable {ring.variables[j]!r} is not greater than 1")
        self._cache: dict = {}

    @classmethod
    def deglex(cls, ring: PolynomialRing) -> "MonomialOrder":
        n = ring.nvars
        rows = [[1] * n] + [[1 if j == i else 0 for j in range(n)] for i in range(n - 1)]
        if n == 1:
            rows = [[1]]
        return cls(ring, rows, "deglex")

    @classmethod
    def grevlex(cls, ring: PolynomialRing) -> "MonomialOrder":
        n = ring.nvars
        rows = [[1] * n] + [[-1 if j == i else 0 for j in range(n)] for i in range(n - 1, 0, -1)]
        return cls(ring, rows, "grevlex")

    @classmethod
    def lex(cls, ring: PolynomialRing) -> "MonomialOrder":
        n = ring.nvars
        return cls(ring, [[1 if j == i else 0 for j in range(n)] for i in range(n)], "lex")

    @classmethod
    def elimination(cls, ring: PolynomialRing, eliminate: Sequence[str]) -> "MonomialOrder":
        """Degree-reverse-lex on ``eliminate`` first, then grevlex on the rest."""
        elim = [ring.index(v) for v in eliminate]
        keep = [i for i in range(ring.nvars) if i not in elim]
        n = ring.nvars
        rows = []

        def block(idx):
            out = [[1 if j in idx else 0 for j in range(n)]]
            for i in reversed(idx[1:]):
                out.append([-1 if j == i else 0 for j in range(n)])
            return out

        rows += block(elim)
        if keep:
            rows += block(keep)
        return cls(ring, rows, "elimination")

    def key(self, exp) -> tuple:
        k = self._cache.get(exp)
        if k is None:
            k = tuple(sum(w * e for w, e in zip(row, exp)) for row in self.weights)
            if len(self._cache) < 500_000:
                self._cache[exp] = k
        return k

    def compare(self, a, b) -> int:
        """-1, 0 or 1 according as x^a is less than, equal to or greater than x^b."""
        a, b = tuple(a), tuple(b)
        n = self.ring.nvars
        if len(a) != n or len(b) != n:
            raise OrderError("exponent vector length does not match the order's ring")
        ka, kb = self.key(a), self.key(b)
        return (ka > kb) - (ka < kb)

    def leading(self, terms) -> tuple:
        return max(terms, key=self.key)

    def sort_desc(self, exps) -> list:
        return sorted(exps, key=self.key, reverse=True)

    def is_elimination_for(self, eliminated: Sequence[str]) -> bool:
        """True if every monomial involving ``eliminated`` exceeds all monomials free of them.

        Checked on the leading block of rows that vanish on the kept columns:
        that block must order every nonzero exponent on ``eliminated`` above 1.
        """
        elim = {self.ring.index(v) for v in eliminated}
        keep = [j for j in range(self.ring.nvars) if j not in elim]
        block = []
        for row in self.weights:
            if any(row[j] for j in keep):
                break
            block.append(row)
        cols = sorted(elim)
        for row in block:
            if not cols:
                break
            if any(row[j] < 0 for j in cols):
                return False
            cols = [j for j in cols if row[j] == 0]
        return not cols

    def __eq__(self, other) -> bool:
        return isinstance(other, MonomialOrder) and self.ring == other.ring and self.weights == other.weights

    def __hash__(self) -> int:
        return hash((self.ring, self.weights))

    def __repr__(self) -> str:
        return f"MonomialOrder({self.name}, {list(map(list, self.weights))})"

"""Exact linear algebra on sparse vectors (dicts from keys to field elements).

Works for any coefficient type with exact ``+ - * /`` and truthiness, so both
rationals and rational functions are supported.
"""
from __future__ import annotations

from typing import Hashable, Iterable, Sequence


class EchelonBasis:
    """Incremental row echelon form.

    ``add`` reduces a vector against the stored pivots and keeps the
    remainder as a new pivot row if it is nonzero.  The pivot of a row is
    its largest entry under ``key``; reduction always clears the largest
    remaining pivot first, so it only ever moves downwards.  Each stored row
    also records how it was combined from the inserted vectors, which gives
    kernels and solution coefficients for free.
    """

    def __init__(self, key=None):
        self.rows: list = []  # (pivot, vector, combination)
        self.pivot_index: dict = {}
        self.count = 0
        self.key = key or (lambda k: k)

    def reduce(self, vec: dict, combo: dict | None = None):
        vec = {k: v for k, v in vec.items() if v}
        combo = dict(combo or {})
        key = self.key
        while True:
            hits = [k for k in vec if k in self.pivot_index]
            if not hits:
                return vec, combo
            k = max(hits, key=key)
            piv, row, rc = self.rows[self.pivot_index[k]]
            f = vec[k] / row[piv]
            _axpy(vec, row, f)
            _axpy(combo, rc, f)

    def add(self, vec: dict, label: Hashable | None = None, one=1):
        """Insert ``vec``; returns ``(remainder or None, combination)``."""
        label = self.count if label is None else label
        self.count += 1
        rem, combo = self.reduce(vec, {label: one})
        if not rem:
            return None, combo
        piv = max(rem, key=self.key)
        self.pivot_index[piv] = len(self.rows)
        self.rows.append((piv, rem, combo))
        return rem, combo

    @property
    def rank(self) -> int:
        return len(self.rows)


def _axpy(vec: dict, row: dict, f):
    """``vec -= f * row`` in place, dropping zeros."""
    for kk, vv in row.items():
        nv = vec.get(kk)
        nv = -f * vv if nv is None else nv - f * vv
        if nv:
            vec[kk] = nv
        else:
            vec.pop(kk, None)


def rank(vectors: Iterable[dict], key=None) -> int:
    e = EchelonBasis(key)
    for v in vectors:
        e.add(v)
    return e.rank


def kernel(columns: Sequence[dict], one=1) -> list:
    """Basis of ``{c : sum c_i * columns[i] = 0}`` as dicts ``{i: c_i}``."""
    e = EchelonBasis()
    out = []
    for i, col in enumerate(columns):
        rem, combo = e.add(col, label=i, one=one)
        if rem is None:
            out.append(combo)
    return out


def solve(columns: Sequence[dict], target: dict, one=1):
    """Coefficients ``c`` with ``sum c_i * columns[i] == target``, or ``None``."""
    e = EchelonBasis()
    for i, col in enumerate(columns):
        e.add(col, label=i, one=one)
    rem, combo = e.reduce(target, {})
    if rem:
        return None
    return {k: -v for k, v in combo.items()}

"""Differential forms over a polynomial ring.

A form is a map from strictly increasing index tuples (positions into the
ring's variable sequence) to polynomial coefficients.  Text output writes
``dx{ijk}`` with 1-based positions.
"""
from __future__ import annotations

from itertools import combinations
from typing import Mapping

from .algebra import Polynomial, PolynomialError, PolynomialRing, RingMismatchError


class FormDegreeError(PolynomialError):
    pass


def _sort_sign(indices):
    """Sign of the sorting permutation, or 0 if an index repeats."""
    idx = list(indices)
    if len(set(idx)) != len(idx):
        return 0, ()
    sign = 1
    for i in range(len(idx)):
        for j in range(i + 1, len(idx)):
            if idx[i] > idx[j]:
                sign = -sign
    return sign, tuple(sorted(idx))


class DifferentialForm:
    __slots__ = ("ring", "degree", "components")

    def __init__(self, ring: PolynomialRing, degree: int, components: Mapping | None = None):
        if degree < 0:
            raise FormDegreeError("negative form degree")
        self.ring = ring
        self.degree = degree
        comps = {}
        for K, p in (components or {}).items():
            K = tuple(K)
            if len(K) != degree:
                raise FormDegreeError(f"index set {K} does not have {degree} elements")
            if not isinstance(p, Polynomial):
                p = ring.constant(p)
            elif p.ring != ring:
                raise RingMismatchError("form coefficient in a different ring")
            if not p:
                continue
            sign, Ks = _sort_sign(K)
            if sign == 0 or any(k < 0 or k >= ring.nvars for k in Ks):
                if sign == 0:
                    continue
                raise FormDegreeError(f"index set {K} out of range")
            val = p if sign > 0 else -p
            if Ks in comps:
                val = comps[Ks] + val
                if not val:
                    del comps[Ks]
                    continue
            comps[Ks] = val
        if degree > ring.nvars and comps:
            raise FormDegreeError("form degree exceeds the number of variables")
        self.components = comps

    # constructors
    @classmethod
    def zero(cls, ring: PolynomialRing, degree: int) -> "DifferentialForm":
        return cls(ring, degree, {})

    @classmethod
    def function(cls, p: Polynomial) -> "DifferentialForm":
        return cls(p.ring, 0, {(): p})

    @classmethod
    def dx(cls, ring: PolynomialRing, *indices, coeff=None) -> "DifferentialForm":
        """``coeff * dx_{i1} ^ ... ^ dx_{ik}``; indices are positions or variable names."""
        pos = [ring.index(i) if isinstance(i, str) else int(i) for i in indices]
        c = ring.one() if coeff is None else (coeff if isinstance(coeff, Polynomial) else ring.constant(coeff))
        return cls(ring, len(pos), {tuple(pos): c})

    @classmethod
    def top(cls, p: Polynomial) -> "DifferentialForm":
        return p_iso(p)

    # algebra
    def _check(self, other: "DifferentialForm"):
        if not isinstance(other, DifferentialForm):
            raise TypeError("expected a DifferentialForm")
        if other.ring != self.ring:
            raise RingMismatchError("forms over different rings")

    def __bool__(self) -> bool:
        return bool(self.components)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DifferentialForm):
            return NotImplemented
        if self.ring != other.ring:
            return False
        if not self.components and not other.components:
            return True
        return self.degree == other.degree and self.components == other.components

    def __hash__(self) -> int:
        return hash((self.ring, self.degree, frozenset(self.components.items())))

    def __add__(self, other: "DifferentialForm") -> "DifferentialForm":
        self._check(other)
        if not other.components:
            return self
        if not self.components:
            return other
        if other.degree != self.degree:
            raise FormDegreeError("adding forms of different degree")
        comps = dict(self.components)
        for K, p in other.components.items():
            v = comps.get(K)
            v = p if v is None else v + p
            if v:
                comps[K] = v
            else:
                comps.pop(K, None)
        return DifferentialForm._raw(self.ring, self.degree, comps)

    def __neg__(self) -> "DifferentialForm":
        return DifferentialForm._raw(self.ring, self.degree, {K: -p for K, p in self.components.items()})

    def __sub__(self, other: "DifferentialForm") -> "DifferentialForm":
        return self + (-other)

    def __mul__(self, other) -> "DifferentialForm":
        """Multiply by a polynomial or scalar (for forms use :func:`wedge`)."""
        if isinstance(other, DifferentialForm):
            return wedge(self, other)
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise RingMismatchError("coefficient in a different ring")
            comps = {K: p * other for K, p in self.components.items()}
        else:
            comps = {K: p.scale(other) for K, p in self.components.items()}
        return DifferentialForm._raw(self.ring, self.degree, {K: p for K, p in comps.items() if p})

    __rmul__ = __mul__

    def __xor__(self, other: "DifferentialForm") -> "DifferentialForm":
        return wedge(self, other)

    @classmethod
    def _raw(cls, ring, degree, comps) -> "DifferentialForm":
        f = object.__new__(cls)
        f.ring, f.degree, f.components = ring, degree, comps
        return f

    def coefficient(self, *indices) -> Polynomial:
        pos = [self.ring.index(i) if isinstance(i, str) else int(i) for i in indices]
        sign, K = _sort_sign(pos)
        p = self.components.get(K, self.ring.zero())
        return p if sign >= 0 else -p

    def map_coefficients(self, fn, ring: PolynomialRing | None = None) -> "DifferentialForm":
        ring = ring or self.ring
        return DifferentialForm(ring, self.degree, {K: fn(p) for K, p in self.components.items()})

    def to_ring(self, ring: PolynomialRing) -> "DifferentialForm":
        """Move to a ring with the same variable sequence (e.g. a different field)."""
        if ring.variables != self.ring.variables:
            raise RingMismatchError("to_ring needs the same variable sequence")
        return DifferentialForm(ring, self.degree, {K: p.to_ring(ring) for K, p in self.components.items()})

    def total_degree(self) -> int:
        return max((p.total_degree() for p in self.components.values()), default=-1)

    def __str__(self) -> str:
        return form_print(self)

    def __repr__(self) -> str:
        return f"DifferentialForm({form_print(self)!r})"


def wedge(a: DifferentialForm, b: DifferentialForm) -> DifferentialForm:
    a._check(b)
    deg = a.degree + b.degree
    comps: dict = {}
    for K, p in a.components.items():
        for L, q in b.components.items():
            sign, M = _sort_sign(K + L)
            if not sign:
                continue
            v = p * q
            if sign < 0:
                v = -v
            cur = comps.get(M)
            v = v if cur is None else cur + v
            if v:
                comps[M] = v
            else:
                comps.pop(M, None)
    if deg > a.ring.nvars:
        return DifferentialForm._raw(a.ring, deg, {})
    return DifferentialForm._raw(a.ring, deg, comps)


def exterior_d(a: DifferentialForm) -> DifferentialForm:
    """Exterior derivative with respect to every ring variable."""
    ring = a.ring
    comps: dict = {}
    for K, p in a.components.items():
        for j, v in enumerate(ring.variables):
            if j in K:
                continue
            dp = p.derivative(v)
            if not dp:
                continue
            before = sum(1 for k in K if k < j)
            M = tuple(sorted(K + (j,)))
            if before % 2:
                dp = -dp
            cur = comps.get(M)
            dp = dp if cur is None else cur + dp
            if dp:
                comps[M] = dp
            else:
                comps.pop(M, None)
    return DifferentialForm._raw(ring, a.degree + 1, comps)


def d(p) -> DifferentialForm:
    """Exterior derivative of a polynomial or form."""
    if isinstance(p, Polynomial):
        p = DifferentialForm.function(p)
    return exterior_d(p)


def p_iso(p: Polynomial) -> DifferentialForm:
    """The identification ``f -> f dx_N`` of functions with top-degree forms."""
    n = p.ring.nvars
    return DifferentialForm(p.ring, n, {tuple(range(n)): p})


def p_iso_inv(top: DifferentialForm) -> Polynomial:
    n = top.ring.nvars
    if top.components and top.degree != n:
        raise FormDegreeError(f"expected a top-degree ({n}) form, got degree {top.degree}")
    return top.components.get(tuple(range(n)), top.ring.zero())


def form_print(a: DifferentialForm) -> str:
    """Text such as ``x1 dx{23} - 2 dx{13}`` (index sets in descending order)."""
    if not a.components:
        return "0"
    if a.degree == 0:
        return str(a.components[()])
    out = []
    for k, K in enumerate(sorted(a.components, reverse=True)):
        p = a.components[K]
        label = "dx{" + "".join(str(i + 1) for i in K) + "}"
        s = str(p)
        neg = False
        if len(p.terms) == 1:
            if s.startswith("-"):
                neg, s = True, s[1:]
        else:
            s = f"({s})"
        body = label if s == "1" else f"{s} {label}"
        if k == 0:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)


def basis_forms(ring: PolynomialRing, degree: int):
    """All ``dx_K`` with ``|K| = degree``, in increasing index order."""
    return [DifferentialForm.dx(ring, *K) for K in combinations(range(ring.nvars), degree)]

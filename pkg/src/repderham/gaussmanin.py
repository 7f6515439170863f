"""Gauss-Manin connection of the sigma11 family on its top cohomology.

Basis classes are ``m * x1 dx{23}`` for ``m`` in ``1, x1, x2, x3, x1^2``.
Each class ``u`` has ``du = c dx{123}`` and ``dx{123} = eta ^ dt``, so the
connection sends ``u`` to the class of ``c * eta`` on the fiber.  That class
is located by applying ``d`` and rewriting the resulting top form over the
field ``Q(b)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from gmpy2 import mpq

from .algebra import (
    QQ,
    MonomialOrder,
    Polynomial,
    PolynomialError,
    PolynomialRing,
    RationalFunction,
    RationalFunctionField,
    UPoly,
    lift,
    parse_rational_function,
    to_mpq,
)
from .derham import CANONICAL, basis_class, class_coordinates, reduce_top, x_ring
from .forms import DifferentialForm, d, form_print, p_iso_inv, wedge
from .varieties import T_TEXT, X3


class LiftError(PolynomialError):
    pass


class UnsplitDenominatorError(PolynomialError):
    pass


class HigherOrderPoleError(PolynomialError):
    pass


# ring of x together with the base coordinate t as a variable
XT_RING = PolynomialRing(X3 + ("t",))


def t_polynomial(ring: PolynomialRing | None = None) -> Polynomial:
    ring = ring or x_ring()
    return ring.parse(T_TEXT)


# ---------------------------------------------------------------------------
# eta
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EtaForm:
    """``numerator / denominator(t)`` with the numerator a 2-form in ``x1, x2, x3, t``."""

    numerator: DifferentialForm
    denominator: UPoly

    def _substituted(self) -> DifferentialForm:
        xr = x_ring()
        t = t_polynomial(xr)
        comps = {}
        for K, p in self.numerator.components.items():
            comps[K] = p.substitute({"t": t}, xr)
        return DifferentialForm(xr, 2, comps)

    def wedge_dt_identity(self) -> bool:
        """``numerator(t(x)) ^ dt == denominator(t(x)) dx{123}`` exactly."""
        xr = x_ring()
        t = t_polynomial(xr)
        lhs = p_iso_inv(wedge(self._substituted(), d(t)))
        rhs = xr.zero()
        power = xr.one()
        for c in self.denominator.c:
            if c:
                rhs = rhs + power.scale(c)
            power = power * t
        return lhs == rhs

    def cleared(self) -> DifferentialForm:
        """The numerator: ``denominator * eta``, polynomial coefficients."""
        return self.numerator

    def on_fiber(self, var: str = "b") -> DifferentialForm:
        """Restriction to the fiber ``t = b`` as a form over ``Q(b)``."""
        field = RationalFunctionField(var)
        ring = x_ring(field)
        inv = RationalFunction(UPoly([1]), self.denominator, var)
        bpoly = ring.constant(field.gen)
        comps = {}
        for K, p in self.numerator.components.items():
            pb = p.to_ring(PolynomialRing(XT_RING.variables, QQ))
            q = pb.map_coefficients(lambda c: c, PolynomialRing(XT_RING.variables, field))
            q = q.substitute({"t": bpoly}, ring)
            comps[K] = q * ring.constant(inv)
        return DifferentialForm(ring, 2, comps)

    def text(self) -> str:
        return f"({form_print(self.numerator)}) / ({self.denominator.to_str('t')})"


def handwritten_eta() -> EtaForm:
    """The hand-written factor: numerator over ``2(t^2 - 4)``."""
    r = XT_RING
    num = (
        DifferentialForm.dx(r, 1, 2, coeff=r.parse("(t - 2)*x1"))
        + DifferentialForm.dx(r, 0, 1, coeff=r.parse("x3*(x3^2 - 4)"))
        + DifferentialForm.dx(r, 0, 2, coeff=r.parse("2*x1*x3 + 2*x2 - t*x2 - x2*x3^2"))
    )
    return EtaForm(num, UPoly([-8, 0, 2]))


def eta_factorization() -> EtaForm:
    """Construct eta from a cofactor lift of ``t^2 - 4`` into the partials of ``t``.

    With ``t^2 - 4 = g1 dt/dx1 + g2 dt/dx2 + g3 dt/dx3`` the form
    ``(g1 dx{23} - g2 dx{13} + g3 dx{12}) / (t^2 - 4)`` wedges with ``dt``
    to ``dx{123}``.
    """
    xr = x_ring()
    t = t_polynomial(xr)
    partials = [t.derivative(v) for v in X3]
    target = t * t - xr.constant(4)
    cof = lift(partials, target, MonomialOrder.grevlex(xr))
    if cof is None:
        raise LiftError("t^2 - 4 is not in the ideal of the partials of t")
    g1, g2, g3 = (c.to_ring(XT_RING) for c in cof)
    num = (
        DifferentialForm.dx(XT_RING, 1, 2, coeff=g1)
        - DifferentialForm.dx(XT_RING, 0, 2, coeff=g2)
        + DifferentialForm.dx(XT_RING, 0, 1, coeff=g3)
    )
    return EtaForm(num, UPoly([-4, 0, 1]))


# ---------------------------------------------------------------------------
# rational function matrices and partial fractions
# ---------------------------------------------------------------------------

def _divisors(n: int) -> list:
    n = abs(n)
    out = []
    k = 1
    while k * k <= n:
        if n % k == 0:
            out += [k, n // k]
        k += 1
    return sorted(set(out))


def rational_roots(p: UPoly) -> list:
    """Distinct rational roots, ascending."""
    if not p or p.degree < 1:
        return []
    c = p.content_primitive()
    coeffs = [int(v) for v in c.c]
    # strip zero roots
    roots = []
    k = 0
    while coeffs[k] == 0:
        k += 1
    if k:
        roots.append(mpq(0))
    coeffs = coeffs[k:]
    q = UPoly(coeffs)
    if q.degree >= 1:
        for a in _divisors(coeffs[0]):
            for b in _divisors(coeffs[-1]):
                for s in (1, -1):
                    r = mpq(s * a, b)
                    if not q(r) and r not in roots:
                        roots.append(r)
    return sorted(roots)


@dataclass(frozen=True)
class PoleTerm:
    at: object
    order: int
    coeff: object


@dataclass(frozen=True)
class PartialFractions:
    poly: UPoly
    terms: tuple
    var: str = "t"

    def reassemble(self) -> RationalFunction:
        out = RationalFunction(self.poly, None, self.var)
        for term in self.terms:
            den = UPoly.from_roots([term.at] * term.order)
            out = out + RationalFunction(UPoly([term.coeff]), den, self.var)
        return out

    def coefficient(self, at, order: int = 1):
        at = to_mpq(at)
        for term in self.terms:
            if term.at == at and term.order == order:
                return term.coeff
        return mpq(0)

    def to_json(self) -> dict:
        from .algebra import format_rational

        return {
            "poly": self.poly.to_str(self.var),
            "poles": [
                {"at": format_rational(t.at), "order": t.order, "coeff": format_rational(t.coeff)}
                for t in self.terms
            ],
        }

    def __str__(self) -> str:
        """E.g. ``3/(2*(t - 2)) - 1/(t + 2)``."""
        from .algebra import format_rational

        parts = []
        if self.poly:
            parts.append((1, self.poly.to_str(self.var)))
        for t in self.terms:
            at = format_rational(abs(t.at))
            lin = self.var if not t.at else f"{self.var} {'-' if t.at > 0 else '+'} {at}"
            lin = f"({lin})" if t.order == 1 else f"({lin})^{t.order}"
            c = abs(t.coeff)
            num, den = int(c.numerator), int(c.denominator)
            body = f"{num}/{lin}" if den == 1 else f"{num}/({den}*{lin})"
            parts.append((-1 if t.coeff < 0 else 1, body))
        if not parts:
            return "0"
        out = ("-" if parts[0][0] < 0 else "") + parts[0][1]
        for sgn, body in parts[1:]:
            out += (" - " if sgn < 0 else " + ") + body
        return out


def _series_quotient(num: UPoly, den: UPoly, n: int) -> list:
    """First ``n`` Taylor coefficients of ``num/den`` at 0 (``den(0) != 0``)."""
    a = list(num.c) + [mpq(0)] * n
    b = list(den.c) + [mpq(0)] * n
    out = []
    for k in range(n):
        s = a[k] - sum((out[j] * b[k - j] for j in range(k)), mpq(0))
        out.append(s / b[0])
    return out


def partial_fractions(r: RationalFunction, poles: Sequence | None = None) -> PartialFractions:
    """Polynomial part plus simple-fraction terms over the given poles.

    Without ``poles`` the rational roots of the denominator are used.  The
    denominator must split completely over the poles.
    """
    num, den = r.num, r.den
    poly, rem = divmod(num, den)
    if poles is None:
        poles = rational_roots(den)
    poles = [to_mpq(p) for p in poles]
    # multiplicities
    rest = den
    mult = {}
    for p in poles:
        lin = UPoly([-p, 1])
        m = 0
        while rest.degree >= 1:
            q, rr = divmod(rest, lin)
            if rr:
                break
            rest, m = q, m + 1
        mult[p] = m
    if rest.degree >= 1:
        raise UnsplitDenominatorError(f"denominator {den.to_str(r.var)} does not split over {poles}")
    terms = []
    for p in poles:
        m = mult[p]
        if not m:
            continue
        cofactor = den
        for _ in range(m):
            cofactor = cofactor // UPoly([-p, 1])
        series = _series_quotient(rem.shift(p), cofactor.shift(p), m)
        for k, c in enumerate(series):
            if c:
                terms.append(PoleTerm(p, m - k, c))
    terms.sort(key=lambda t: (-t.at, t.order))
    return PartialFractions(poly, tuple(terms), r.var)


class RationalFunctionMatrix:
    def __init__(self, entries, var: str = "t"):
        self.var = var
        self.entries = tuple(
            tuple(e if isinstance(e, RationalFunction) else RationalFunction(e, None, var) for e in row)
            for row in entries
        )
        self.shape = (len(self.entries), len(self.entries[0]) if self.entries else 0)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __eq__(self, other) -> bool:
        return isinstance(other, RationalFunctionMatrix) and self.entries == other.entries

    def __hash__(self) -> int:
        return hash(self.entries)

    def poles(self) -> list:
        out = set()
        for row in self.entries:
            for e in row:
                out.update(rational_roots(e.den))
        return sorted(out)

    def partial_fractions(self) -> list:
        poles = self.poles()
        return [[partial_fractions(e, poles) for e in row] for row in self.entries]

    def submatrix(self, idx: Sequence[int]) -> "RationalFunctionMatrix":
        return RationalFunctionMatrix([[self.entries[i][j] for j in idx] for i in idx], self.var)

    def blocks(self) -> list:
        """Index sets of the finest block-diagonal decomposition."""
        n = self.shape[0]
        parent = list(range(n))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for i in range(n):
            for j in range(n):
                if self.entries[i][j]:
                    parent[find(i)] = find(j)
        groups: dict = {}
        for i in range(n):
            groups.setdefault(find(i), []).append(i)
        return sorted(groups.values())

    def to_json(self) -> list:
        return [[p.to_json() for p in row] for row in self.partial_fractions()]

    def text_rows(self) -> list:
        return [[str(p) for p in row] for row in self.partial_fractions()]


def residue(E: RationalFunctionMatrix, p) -> list:
    """Coefficient matrix of ``1/(t - p)``; ``p = "inf"`` gives minus the sum of finite residues."""
    if isinstance(p, str) and p in ("inf", "infinity", "oo"):
        pf = E.partial_fractions()
        out = [[mpq(0)] * E.shape[1] for _ in range(E.shape[0])]
        for i, row in enumerate(pf):
            for j, e in enumerate(row):
                if e.poly:
                    raise HigherOrderPoleError("entry has a polynomial part; infinity is not a simple pole")
                for t in e.terms:
                    if t.order > 1:
                        raise HigherOrderPoleError(f"pole of order {t.order} at {t.at}")
                    out[i][j] -= t.coeff
        return out
    p = to_mpq(p)
    pf = E.partial_fractions()
    out = [[mpq(0)] * E.shape[1] for _ in range(E.shape[0])]
    for i, row in enumerate(pf):
        for j, e in enumerate(row):
            for t in e.terms:
                if t.at == p:
                    if t.order > 1:
                        raise HigherOrderPoleError(f"pole of order {t.order} at {p}")
                    out[i][j] = t.coeff
    return out


# ---------------------------------------------------------------------------
# the connection matrix
# ---------------------------------------------------------------------------

def basis_derivative_factors() -> list:
    """``c`` with ``d(m x1 dx{23}) = c dx{123}`` for each canonical ``m``."""
    ring = x_ring()
    return [p_iso_inv(d(basis_class(ring, m))) for m in CANONICAL]


def reduce_class(form: DifferentialForm) -> tuple:
    """Coordinates in the canonical basis of the class of a 2-form on the sigma11 fiber over ``Q(b)``."""
    ring = form.ring
    f = t_polynomial(ring) - ring.constant(ring.field.gen)
    canonical, cert = reduce_top(f, d(form))
    return class_coordinates(canonical), canonical, cert


def connection_matrix(eta: EtaForm | None = None, *, var: str = "t", with_details: bool = False):
    """The 5x5 matrix ``E(t)``; row ``i`` holds the coordinates of the connection applied to class ``i``."""
    eta = eta or eta_factorization()
    fe = eta.on_fiber("b")
    ring = fe.ring
    rows, details = [], []
    for c in basis_derivative_factors():
        w = fe * c.map_coefficients(lambda q: q, ring)
        coords, canonical, cert = reduce_class(w)
        rows.append([x.rename(var) for x in coords])
        details.append((w, canonical, cert))
    E = RationalFunctionMatrix(rows, var)
    return (E, details) if with_details else E


def _rf(text: str, var: str = "t") -> RationalFunction:
    return parse_rational_function(text, var)


def reference_connection_matrix(var: str = "t") -> RationalFunctionMatrix:
    """The expected E(t) written out by hand."""
    z = "0"
    rows = [
        ["3/(2*(t+2)) - 1/(2*(t-2))", z, z, z, "-1/(6*(t+2)) + 1/(6*(t-2))"],
        [z, "3/(2*(t-2))", z, z, z],
        [z, z, "3/(2*(t-2))", z, z],
        [z, z, z, "3/(2*(t-2))", z],
        ["-6/(t-2)", z, z, z, "2/(t-2)"],
    ]
    return RationalFunctionMatrix([[_rf(e).rename(var) for e in row] for row in rows], var)


def rank2_subsystem(E: RationalFunctionMatrix) -> RationalFunctionMatrix:
    """The 2x2 block on the coordinates of ``1`` and ``x1^2``."""
    for blk in E.blocks():
        if len(blk) == 2:
            return E.submatrix(blk)
    raise PolynomialError("no rank-2 block in the connection matrix")

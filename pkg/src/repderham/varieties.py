"""Trace-coordinate presentations of the three surface families.

* ``sigma11``: one-holed torus, fiber coordinates ``x1, x2, x3`` and one
  boundary trace ``t``.
* ``sigma04``: four-holed sphere, fiber coordinates ``x1, x2, x3`` and four
  boundary traces ``t1..t4``; every fiber is a hypersurface.
* ``sigma12``: two-holed torus, six fiber coordinates and two boundary
  traces, cut out by two relations.

Parameter values are passed as sequences whose entries are exact rationals or
``None``.  A ``None`` entry keeps that parameter symbolic: it becomes a ring
variable ``b`` (or ``b1, b2, ...``).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .algebra import Ideal, MonomialOrder, Polynomial, PolynomialError, PolynomialRing, to_mpq
from .algebra.orders import _rank

SURFACES = ("sigma11", "sigma04", "sigma12")


class UnknownSurfaceError(PolynomialError):
    pass


class ArityError(PolynomialError):
    pass


T_TEXT = "-2 + x1^2 + x2^2 - x1*x2*x3 + x3^2"

U4_TEXT = (
    "4 - t1^2 - t2^2 - t3^2 - t1*t2*t3*t4 - t4^2 + t1*t2*x1 + t3*t4*x1 - x1^2"
    " + t1*t3*x2 + t2*t4*x2 - x2^2 + t2*t3*x3 + t1*t4*x3 - x1*x2*x3 - x3^2"
)

U2_TEXT = (
    "4 - x1^2 - x2^2 - x3^2 - x1*x2*x3*t1 - t1^2 + x1*x2*x12 + x3*t1*x12 - x12^2"
    " + x1*x3*x13 + x2*t1*x13 - x13^2 + x2*x3*x23 + x1*t1*x23 - x12*x13*x23 - x23^2"
)

US_TEXT = "t1 + t2 - (x3*x12 + x2*x13 + x1*x23 - x1*x2*x3)"

# Relation on the three-generator free group in its native trace coordinates.
U_FREE3_TEXT = (
    "4 - z1^2 - z2^2 - z3^2 - z1*z2*z3*z123 - z123^2 + z1*z2*z12 + z3*z123*z12 - z12^2"
    " + z1*z3*z13 + z2*z123*z13 - z13^2 + z2*z3*z23 + z1*z123*z23 - z12*z13*z23 - z23^2"
)
FREE3_RING = PolynomialRing(("z1", "z2", "z3", "z12", "z13", "z23", "z123"))
# sigma04 coordinates in terms of the free-group trace coordinates
SIGMA04_RENAMING = {"x1": "z12", "x2": "z13", "x3": "z23", "t1": "z1", "t2": "z2", "t3": "z3", "t4": "z123"}

X3 = ("x1", "x2", "x3")
X6 = ("x1", "x2", "x3", "x12", "x13", "x23")
X3_RING = PolynomialRing(X3)
X6_RING = PolynomialRing(X6)

# Elimination variable sequences and weight matrices (columns follow the sequence).
ELIM_VARIABLES = {
    "sigma11": ("x3", "x2", "x1", "b"),
    "sigma04": ("x3", "x2", "x1", "b4", "b3", "b2", "b1"),
    "sigma12": ("x23", "x13", "x12", "x3", "x2", "x1", "b2", "b1"),
}
ELIM_WEIGHTS = {
    "sigma11": (
        (1, 1, 1, 0),
        (1, 0, 0, 0),
        (0, 1, 0, 0),
        (0, 0, 0, 1),
    ),
    "sigma04": (
        (1, 1, 1, 0, 0, 0, 0),
        (1, 0, 0, 0, 0, 0, 0),
        (0, 1, 0, 0, 0, 0, 0),
        (0, 0, 0, 1, 1, 1, 1),
        (0, 0, 0, 1, 1, 1, 0),
        (0, 0, 0, 1, 1, 0, 0),
        (0, 0, 0, 1, 0, 0, 0),
    ),
    "sigma12": (
        (1, 1, 1, 1, 1, 1, 0, 0),
        (1, 0, 0, 0, 0, 0, 0, 0),
        (0, 1, 0, 0, 0, 0, 0, 0),
        (0, 0, 1, 0, 0, 0, 0, 0),
        (0, 0, 0, 1, 0, 0, 0, 0),
        (0, 0, 0, 0, 1, 0, 0, 0),
        (0, 0, 0, 0, 0, 0, 1, 1),
        (0, 0, 0, 0, 0, 0, 1, 0),
    ),
}


@dataclass(frozen=True)
class SurfacePresentation:
    surface: str
    ambient_ring: PolynomialRing
    fiber_variables: tuple
    trace_variables: tuple
    parameters: tuple
    relations: tuple
    boundary_traces: tuple

    @property
    def nparams(self) -> int:
        return len(self.parameters)

    @property
    def codim(self) -> int:
        """Codimension of a fiber inside its fiber-coordinate space."""
        return 2 if self.surface == "sigma12" else 1


def _check_surface(surface: str):
    if surface not in SURFACES:
        raise UnknownSurfaceError(f"unknown surface {surface!r}; expected one of {', '.join(SURFACES)}")


def param_names(surface: str) -> tuple:
    _check_surface(surface)
    return {"sigma11": ("b",), "sigma04": ("b1", "b2", "b3", "b4"), "sigma12": ("b1", "b2")}[surface]


def presentation(surface: str) -> SurfacePresentation:
    _check_surface(surface)
    if surface == "sigma11":
        ring = X3_RING
        return SurfacePresentation(surface, ring, X3, (), ("b",), (), (ring.parse(T_TEXT),))
    if surface == "sigma04":
        traces = ("t1", "t2", "t3", "t4")
        ring = PolynomialRing(X3 + traces)
        return SurfacePresentation(
            surface, ring, X3, traces, param_names(surface), (ring.parse(U4_TEXT),),
            tuple(ring.gen(t) for t in traces),
        )
    traces = ("t1", "t2")
    ring = PolynomialRing(X6 + traces)
    return SurfacePresentation(
        surface, ring, X6, traces, param_names(surface),
        (ring.parse(U2_TEXT), ring.parse(US_TEXT)),
        tuple(ring.gen(t) for t in traces),
    )


def _normalize_params(surface: str, b) -> list:
    names = param_names(surface)
    if b is None:
        return [None] * len(names)
    if isinstance(b, (str, int)) or not isinstance(b, Sequence):
        b = [b]
    b = list(b)
    if len(b) != len(names):
        raise ArityError(f"{surface} takes {len(names)} parameter(s), got {len(b)}")
    return [None if v is None else to_mpq(v) for v in b]


def parse_params(text: str) -> list:
    """``"1,0,-1/2"`` to exact rationals."""
    try:
        return [to_mpq(s.strip()) for s in text.split(",")]
    except (ValueError, ZeroDivisionError) as exc:
        raise ArityError(f"cannot parse parameter values {text!r}: {exc}") from None


def _fiber_ring(surface: str, b: list) -> PolynomialRing:
    names = param_names(surface)
    symbolic = {n for n, v in zip(names, b) if v is None}
    if not symbolic:
        return X6_RING if surface == "sigma12" else X3_RING
    return PolynomialRing(tuple(v for v in ELIM_VARIABLES[surface] if not v.startswith("b") or v in symbolic))


def fiber_ideal(pres: SurfacePresentation | str, b=None, *, reduced: bool = False) -> Ideal:
    """Ideal of the fiber over ``b``.

    sigma11 and sigma04 give principal ideals in the fiber coordinates (with
    any symbolic parameters adjoined).  sigma12 gives the four-generator ideal
    in the ambient ring unless ``reduced`` is set, in which case the traces
    are substituted and the two relations remain.
    """
    if isinstance(pres, str):
        pres = presentation(pres)
    s = pres.surface
    vals = _normalize_params(s, b)
    names = pres.parameters
    if s == "sigma12" and not reduced:
        if any(v is None for v in vals):
            raise ArityError("the unreduced sigma12 fiber ideal needs exact parameter values")
        ring = pres.ambient_ring
        gens = [ring.gen(t) - ring.constant(v) for t, v in zip(pres.trace_variables, vals)]
        return Ideal(ring, gens + list(pres.relations))
    ring = _fiber_ring(s, vals)
    images = {}
    for n, v in zip(names, vals):
        images[n] = ring.gen(n) if v is None else ring.constant(v)
    if s == "sigma11":
        t = pres.boundary_traces[0].substitute({}, ring)
        return Ideal(ring, [t - images["b"]])
    mapping = {tv: images[n] for tv, n in zip(pres.trace_variables, names)}
    return Ideal(ring, [r.substitute(mapping, ring) for r in pres.relations])


def fiber_polynomial(surface: str, b=None) -> Polynomial:
    """Generator of a principal fiber ideal (sigma11, sigma04)."""
    if surface == "sigma12":
        raise ArityError("sigma12 fibers are not hypersurfaces")
    return fiber_ideal(surface, b).generators[0]


def elimination_order(surface: str, ring: PolynomialRing) -> MonomialOrder:
    """The surface's weight matrix restricted to the columns present in ``ring``.

    Rows that do not raise the rank of the restricted matrix are dropped, so
    slices with some parameters fixed inherit the block structure.
    """
    full = ELIM_VARIABLES[surface]
    cols = [full.index(v) for v in ring.variables]
    rows = []
    for row in ELIM_WEIGHTS[surface]:
        r = [row[c] for c in cols]
        if not any(r):
            continue
        if _rank(rows + [r]) > len(rows):
            rows.append(r)
    return MonomialOrder(ring, rows, f"{surface}-elimination")


def fiber_order(surface: str, ring: PolynomialRing) -> MonomialOrder:
    """Degree-modified order on the fiber coordinates induced by the weight matrix."""
    return elimination_order(surface, ring)


# ---------------------------------------------------------------------------
# singular-locus polynomials
# ---------------------------------------------------------------------------

def parameter_ring(surface: str) -> PolynomialRing:
    return PolynomialRing(param_names(surface))


def _elementary(ring: PolynomialRing, k: int) -> Polynomial:
    total = ring.zero()
    for c in itertools.combinations(ring.gens(), k):
        term = ring.one()
        for g in c:
            term = term * g
        total = total + term
    return total


def delta(ring: PolynomialRing | None = None) -> Polynomial:
    """The quartic-sextic factor of the sigma04 singular locus, fully symmetric.

    Built from elementary symmetric polynomials:
    ``s1^4 - 4 s1^2 s2 - s1^2 s4 + 8 s1 s3 + s3^2``.
    """
    ring = ring or parameter_ring("sigma04")
    s1, s2, s3, s4 = (_elementary(ring, k) for k in range(1, 5))
    return s1 ** 4 - 4 * s1 ** 2 * s2 - s1 ** 2 * s4 + 8 * s1 * s3 + s3 ** 2


def delta_expanded(ring: PolynomialRing | None = None) -> Polynomial:
    """The same factor written out monomial type by monomial type (orbit sums)."""
    ring = ring or parameter_ring("sigma04")
    y = ring.gens()
    idx = range(4)
    quartic = sum((v ** 4 for v in y), ring.zero())
    pairs = sum((y[i] ** 2 * y[j] ** 2 for i, j in itertools.combinations(idx, 2)), ring.zero())
    triples = sum((y[i] ** 2 * y[j] ** 2 * y[k] ** 2 for i, j, k in itertools.combinations(idx, 3)), ring.zero())
    prod = y[0] * y[1] * y[2] * y[3]
    squares = sum((v ** 2 for v in y), ring.zero())
    return quartic - 2 * pairs + 8 * prod + triples - prod * squares


def singular_polynomial(surface: str, ring: PolynomialRing | None = None) -> Polynomial:
    """psi for ``surface`` in the parameter ring."""
    _check_surface(surface)
    ring = ring or parameter_ring(surface)
    g = ring.gens()
    four = ring.constant(4)
    if surface == "sigma11":
        return g[0] ** 2 - four
    if surface == "sigma12":
        return (g[0] ** 2 - four) * (g[1] ** 2 - four) * (g[0] - g[1]) ** 2
    out = delta(ring) ** 2
    for v in g:
        out = out * (v ** 2 - four)
    return out


def psi_eval(surface: str, b) -> object:
    vals = _normalize_params(surface, b)
    if any(v is None for v in vals):
        raise ArityError("psi_eval needs exact parameter values")
    ring = parameter_ring(surface)
    if surface == "sigma04":
        # factored evaluation avoids expanding the degree-20 polynomial
        point = dict(zip(ring.variables, vals))
        out = delta(ring).evaluate(point) ** 2
        for v in vals:
            out *= v * v - 4
        return out
    return singular_polynomial(surface, ring).evaluate(dict(zip(ring.variables, vals)))


def psi_factors(surface: str) -> list:
    """Factorization of psi as ``(factor, exponent)`` pairs."""
    ring = parameter_ring(surface)
    g = ring.gens()
    two = ring.constant(2)
    out = []
    for v in g:
        out += [(v - two, 1), (v + two, 1)]
    if surface == "sigma12":
        out.append((g[0] - g[1], 2))
    elif surface == "sigma04":
        out.append((delta(ring), 2))
    return out

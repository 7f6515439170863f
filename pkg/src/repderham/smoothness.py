"""Jacobian ideals, pointwise smoothness tests and singular loci by elimination."""
from __future__ import annotations

import itertools
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .algebra import (
    BudgetExceeded,
    BuchbergerState,
    Ideal,
    MonomialOrder,
    Polynomial,
    PolynomialError,
    PolynomialRing,
    UPoly,
    buchberger,
    eliminate,
    to_mpq,
)
from .varieties import (
    ELIM_VARIABLES,
    ArityError,
    _normalize_params,
    elimination_order,
    fiber_ideal,
    param_names,
    presentation,
    psi_eval,
    psi_factors,
    singular_polynomial,
)


class DegenerateSliceWarning(UserWarning):
    pass


@dataclass(frozen=True)
class JacobianIdealResult:
    ideal: Ideal
    codim: int
    minor_count: int
    minors: tuple = ()


def determinant(rows: list) -> Polynomial:
    """Laplace expansion along the first row (matrices here are at most 2x2 or so)."""
    n = len(rows)
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    total = None
    for j in range(n):
        if not rows[0][j]:
            continue
        sub = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = rows[0][j] * determinant(sub)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    return total if total is not None else rows[0][0].ring.zero()


def jacobian_ideal(ideal: Ideal, codim: int, variables: Sequence[str] | None = None) -> JacobianIdealResult:
    """``I`` plus all ``codim x codim`` minors of ``[d g_i / d v_j]``.

    ``variables`` restricts the columns (by default every ring variable).
    Minors are kept in the result even when they vanish, so
    ``minor_count`` is always ``C(#gens, c) * C(#vars, c)``.
    """
    ring = ideal.ring
    variables = tuple(variables or ring.variables)
    for v in variables:
        ring.index(v)
    gens = list(ideal.generators)
    if codim < 1 or codim > len(gens) or codim > len(variables):
        raise PolynomialError(
            f"codim {codim} does not fit a {len(gens)} x {len(variables)} Jacobian matrix"
        )
    jac = [[g.derivative(v) for v in variables] for g in gens]
    minors = []
    for rows in itertools.combinations(range(len(gens)), codim):
        for cols in itertools.combinations(range(len(variables)), codim):
            minors.append(determinant([[jac[r][c] for c in cols] for r in rows]))
    nonzero = [m for m in minors if m]
    return JacobianIdealResult(Ideal(ring, gens + nonzero), codim, len(minors), tuple(minors))


def fiber_jacobian(surface: str, b=None) -> JacobianIdealResult:
    """Jacobian ideal of a fiber, differentiating in fiber coordinates only."""
    pres = presentation(surface)
    ideal = fiber_ideal(pres, b, reduced=True)
    return jacobian_ideal(ideal, pres.codim, pres.fiber_variables)


def is_smooth_fiber(surface: str, b) -> bool:
    vals = _normalize_params(surface, b)
    if any(v is None for v in vals):
        raise ArityError("is_smooth_fiber needs exact parameter values")
    jac = fiber_jacobian(surface, vals)
    gb = buchberger(jac.ideal, MonomialOrder.grevlex(jac.ideal.ring))
    return gb.is_unit()


def _point_check(args):
    surface, b = args
    smooth = is_smooth_fiber(surface, b)
    value = psi_eval(surface, b)
    return smooth, value


@dataclass(frozen=True)
class PointCheck:
    b: tuple
    smooth: bool
    psi_value: object

    @property
    def agrees(self) -> bool:
        return self.smooth == (self.psi_value != 0)


def check_points(surface: str, points: Sequence, threads: int = 1) -> list:
    """Smoothness and psi at each point; the result order follows ``points``."""
    points = [tuple(to_mpq(v) for v in p) for p in points]
    jobs = [(surface, p) for p in points]
    if threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=threads) as ex:
            results = list(ex.map(_point_check, jobs))
    else:
        results = [_point_check(j) for j in jobs]
    return [PointCheck(p, s, v) for p, (s, v) in zip(points, results)]


@dataclass
class SingularLocusResult:
    surface: str
    psi: Polynomial | None
    generators: list
    elapsed: float = 0.0
    parameters: tuple = ()
    extra: dict = field(default_factory=dict)


def _symbolic_jacobian(surface: str, b) -> JacobianIdealResult:
    pres = presentation(surface)
    ideal = fiber_ideal(pres, b, reduced=True)
    return jacobian_ideal(ideal, pres.codim, pres.fiber_variables)


def rank_drop_charts(
    ideal: Ideal,
    variables: Sequence[str],
    prefix: str = "lam",
    ring_variables: Sequence[str] | None = None,
) -> list:
    """Affine charts of the locus where the generators' gradients are dependent.

    For generators ``g_1 .. g_k`` the gradients (in ``variables``) are
    dependent exactly when ``sum mu_i grad g_i = 0`` for some ``mu != 0``.
    Chart ``j`` sets ``mu_j = 1`` and ``mu_i = 0`` for ``i > j``, leaving
    ``j - 1`` multiplier variables.  Each chart ideal holds the generators
    and the coordinates of that combination.  With one generator the single
    chart is the Jacobian ideal itself.  The charts live in a common ring
    whose variables are ``ring_variables`` (default: the ideal's variables,
    then the multipliers).
    """
    gens = list(ideal.generators)
    k = len(gens)
    lams = tuple(f"{prefix}{i + 1}" for i in range(k - 1))
    names = tuple(ring_variables) if ring_variables else ideal.ring.variables + lams
    if set(names) != set(lams) | set(ideal.ring.variables):
        raise PolynomialError(f"chart ring needs variables {lams + ideal.ring.variables}")
    ring = PolynomialRing(names, ideal.ring.field)
    gens = [g.to_ring(ring) for g in gens]
    grads = [[g.derivative(v) for v in variables] for g in gens]
    charts = []
    for j in range(k):
        combo = list(grads[j])
        for i in range(j):
            lam = ring.gen(lams[i])
            combo = [c + lam * d for c, d in zip(combo, grads[i])]
        charts.append(Ideal(ring, gens + [c for c in combo if c]))
    return charts


def intersect_eliminants(parts: Sequence[Sequence[Polynomial]], ring: PolynomialRing, **kwargs) -> list:
    """Generators of the intersection of ideals given by generators in ``ring``.

    Uses ``I ∩ J = (s I + (1 - s) J) ∩ ring`` pairwise.
    """
    current = [p.to_ring(ring) for p in parts[0]]
    for other in parts[1:]:
        s_ring = PolynomialRing(("_s",) + ring.variables, ring.field)
        s = s_ring.gen("_s")
        gens = [s * g.to_ring(s_ring) for g in current]
        gens += [(s_ring.one() - s) * g.to_ring(s_ring) for g in other]
        order = MonomialOrder.elimination(s_ring, ("_s",))
        current = [g.to_ring(ring) for g in eliminate(Ideal(s_ring, gens), order, ring.variables, **kwargs)]
    return current


def _remaining(deadline):
    if deadline is None:
        return None
    left = deadline - time.monotonic()
    if left <= 0:
        raise BudgetExceeded("budget exhausted between charts", BuchbergerState())
    return left


def _resolve_method(surface: str, method: str) -> str:
    if method not in ("auto", "minors", "charts"):
        raise ValueError("method must be 'auto', 'minors' or 'charts'")
    if method == "auto":
        return "charts" if presentation(surface).codim > 1 else "minors"
    return method


def _chart_eliminate(surface: str, b, keep: Sequence[str], budget_seconds, progress=None):
    """Eliminant of the singular locus through rank-drop charts, plus each chart's eliminant."""
    pres = presentation(surface)
    ideal = fiber_ideal(pres, b, reduced=True)
    # grevlex on the fiber block follows the surface's elimination sequence,
    # with the multipliers last; the variable order matters a lot here
    present = set(ideal.ring.variables)
    seq = [v for v in ELIM_VARIABLES[surface] if v in present]
    fiber = [v for v in seq if v in pres.fiber_variables]
    lams = [f"lam{i + 1}" for i in range(len(ideal.generators) - 1)]
    rest = [v for v in seq if v not in pres.fiber_variables]
    charts = rank_drop_charts(ideal, pres.fiber_variables, ring_variables=fiber + lams + rest)
    ring = charts[0].ring
    elim = [v for v in ring.variables if v not in keep]
    order = MonomialOrder.elimination(ring, elim)
    deadline = None if budget_seconds is None else time.monotonic() + budget_seconds
    kring = PolynomialRing(tuple(keep))
    per_chart = []
    for chart in charts:
        gens = eliminate(chart, order, keep, budget_seconds=_remaining(deadline), progress=progress)
        per_chart.append([g.to_ring(kring) for g in gens])
    if len(per_chart) == 1:
        return per_chart[0], per_chart
    return intersect_eliminants(per_chart, kring, budget_seconds=_remaining(deadline)), per_chart


def singular_locus(
    surface: str,
    *,
    budget_seconds: float | None = None,
    progress: Callable[[dict], None] | None = None,
    state=None,
    method: str = "auto",
) -> SingularLocusResult:
    """Primitive generator(s) of the singular locus eliminated down to the parameters.

    ``method="minors"`` eliminates the Jacobian ideal (generators plus
    maximal minors) under the surface's weight matrix.  ``method="charts"``
    eliminates each rank-drop chart and intersects the results, which gives
    the radical of the same locus far faster for codimension two.  ``auto``
    picks minors for hypersurfaces (where both coincide) and charts
    otherwise.  Raises :class:`BudgetExceeded` (carrying a resumable state
    for the minors route) when the Gröbner runs exceed ``budget_seconds``.
    """
    method = _resolve_method(surface, method)
    keep = param_names(surface)
    pring = PolynomialRing(keep)
    t0 = time.monotonic()
    extra = {"method": method}
    if method == "charts":
        if state is not None:
            raise ValueError("resuming is supported by the minors route only")
        gens, per_chart = _chart_eliminate(surface, None, keep, budget_seconds, progress)
        extra["charts"] = per_chart
    else:
        jac = _symbolic_jacobian(surface, None)
        ring = jac.ideal.ring
        order = elimination_order(surface, ring)
        gens = eliminate(jac.ideal, order, keep, budget_seconds=budget_seconds, progress=progress, state=state)
        gens = [g.to_ring(pring) for g in gens]
    elapsed = time.monotonic() - t0
    psi = gens[0] if len(gens) == 1 else None
    return SingularLocusResult(surface, psi, gens, elapsed, keep, extra)


def radical_psi(surface: str) -> Polynomial:
    """Product of the distinct irreducible factors of psi."""
    ring = PolynomialRing(param_names(surface))
    out = ring.one()
    for fac, _ in psi_factors(surface):
        out = out * fac.to_ring(ring)
    return out


def upoly_of(p: Polynomial, var: str) -> UPoly:
    """Univariate polynomial from a polynomial supported on ``var``."""
    if not p.support_variables() <= {var}:
        raise PolynomialError(f"{p} is not univariate in {var}")
    i = p.ring.index(var)
    deg = max((e[i] for e in p.terms), default=0)
    coeffs = [0] * (deg + 1)
    for e, c in p.terms.items():
        coeffs[e[i]] = c
    return UPoly(coeffs)


@dataclass
class SliceResult:
    surface: str
    fixed: tuple
    variable: str
    generator: Polynomial
    squarefree: UPoly
    expected_squarefree: UPoly
    degenerate: bool
    elapsed: float = 0.0

    @property
    def matches(self) -> bool:
        return self.squarefree.monic() == self.expected_squarefree.monic()


def singular_locus_slice(
    surface: str,
    fixed: Sequence,
    *,
    budget_seconds: float | None = None,
    method: str = "auto",
) -> SliceResult:
    """Elimination with every parameter but the first pinned to ``fixed``.

    The first parameter stays symbolic; the returned generator lives in it
    alone.  A constant generator (the slice misses the singular locus) or
    none at all (every fiber on the slice is singular) is flagged as
    degenerate.  ``method`` is as for
    :func:`singular_locus`.
    """
    names = param_names(surface)
    fixed = tuple(to_mpq(v) for v in fixed)
    if len(fixed) != len(names) - 1:
        raise ArityError(f"{surface} slices fix {len(names) - 1} parameter(s), got {len(fixed)}")
    b = [None, *fixed]
    var = names[0]
    t0 = time.monotonic()
    if _resolve_method(surface, method) == "charts":
        gens, _ = _chart_eliminate(surface, b, [var], budget_seconds)
    else:
        jac = _symbolic_jacobian(surface, b)
        order = elimination_order(surface, jac.ideal.ring)
        gens = eliminate(jac.ideal, order, [var], budget_seconds=budget_seconds)
    elapsed = time.monotonic() - t0
    # a principal ideal in one variable: the basis has at most one element here
    gen = gens[0] if gens else PolynomialRing((var,)).zero()
    if len(gens) > 1:
        raise PolynomialError("univariate elimination returned more than one generator")
    u = upoly_of(gen, var) if gen else UPoly([])
    sqf = u.squarefree_part() if u else u
    # expected: square-free part of psi restricted to the slice
    pring = PolynomialRing(names)
    point = {n: v for n, v in zip(names[1:], fixed)}
    if surface == "sigma04":
        expected = UPoly([1])
        for fac, _ in psi_factors(surface):
            sub = fac.substitute(point, PolynomialRing((var,)))
            expected = expected * upoly_of(sub, var)
    else:
        sub = singular_polynomial(surface, pring).substitute(point, PolynomialRing((var,)))
        expected = upoly_of(sub, var)
    expected = expected.squarefree_part() if expected else expected
    degenerate = (not gen) or gen.is_constant()
    if degenerate:
        what = "a constant" if gen else "no nonzero"
        warnings.warn(f"slice {fixed} of {surface} gives {what} eliminant", DegenerateSliceWarning)
    return SliceResult(
        surface, fixed, var, gen.to_ring(PolynomialRing((var,))) if gen else PolynomialRing((var,)).zero(),
        sqf, expected, degenerate, elapsed,
    )


def random_parameter(rng, surface: str, size: int = 7, den: int = 3) -> tuple:
    """A random exact parameter point with small numerators and denominators."""
    from gmpy2 import mpq

    return tuple(mpq(rng.randint(-size, size), rng.randint(1, den)) for _ in param_names(surface))


__all__ = [
    "BudgetExceeded",
    "DegenerateSliceWarning",
    "ELIM_VARIABLES",
    "JacobianIdealResult",
    "PointCheck",
    "SingularLocusResult",
    "SliceResult",
    "check_points",
    "intersect_eliminants",
    "radical_psi",
    "rank_drop_charts",
    "determinant",
    "fiber_jacobian",
    "is_smooth_fiber",
    "jacobian_ideal",
    "random_parameter",
    "singular_locus",
    "singular_locus_slice",
    "upoly_of",
]

"""Top de Rham cohomology of smooth affine surfaces ``f = 0`` in three-space.

Top forms ``p dx{123}`` are rewritten modulo exact forms ``d(f * omega)``
until only the monomials ``1, x1, x2, x3, x1^2`` remain.  The rewriting
assumes the shape of the two families handled here: the cubic part of
``f`` is a nonzero multiple of ``x1*x2*x3`` and its quadratic part is a
nonzero multiple of ``x1^2 + x2^2 + x3^2``.

Each rewriting step records a 2-form ``g`` so that the step subtracts a
multiple of ``d(f*g)``; replaying the steps reproduces the input exactly.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Sequence

from .algebra import (
    QQ,
    Ideal,
    MonomialOrder,
    Polynomial,
    PolynomialError,
    PolynomialRing,
    buchberger,
    to_mpq,
)
from .algebra.linalg import EchelonBasis, kernel
from .forms import DifferentialForm, exterior_d, form_print, p_iso, p_iso_inv
from .smoothness import is_smooth_fiber
from .varieties import X3, ArityError, _normalize_params, fiber_polynomial


class SingularFiberError(PolynomialError):
    pass


class NotReducibleError(PolynomialError):
    pass


class NonPrincipalError(PolynomialError):
    pass


class BoundTooSmallWarning(UserWarning):
    pass


CANONICAL = ((0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1), (2, 0, 0))
CANONICAL_LABELS = ("1", "x1", "x2", "x3", "x1^2")
# d(m * x1 dx{23}) = scale * m dx{123} for the canonical m
CANONICAL_SCALES = (1, 2, 1, 1, 3)

# degree first, then x3, then x2
DEGREE_MODIFIED = ((1, 1, 1), (0, 0, 1), (0, 1, 0))


def degree_modified_order(ring: PolynomialRing) -> MonomialOrder:
    if ring.variables != X3:
        raise PolynomialError(f"expected the ring in {X3}, got {ring.variables}")
    return MonomialOrder(ring, DEGREE_MODIFIED, "degree-modified")


def x_ring(field=QQ) -> PolynomialRing:
    return PolynomialRing(X3, field)


# ---------------------------------------------------------------------------
# certificates
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ReductionStep:
    tag: str  # mixed, power, x2-square or x3-square
    cofactor: DifferentialForm  # the step subtracts d(f * cofactor)
    delta: Polynomial  # coefficient of d(f * cofactor) on dx{123}
    target: tuple
    weight: tuple
    parts: tuple = ()

    def multiplier(self, f: Polynomial) -> DifferentialForm:
        return self.cofactor * f


@dataclass(frozen=True)
class ReductionCertificate:
    f: Polynomial
    original: Polynomial
    canonical: Polynomial
    steps: tuple

    def replay(self) -> bool:
        """Check ``original = canonical + sum d(f * g_i)`` from scratch."""
        total = p_iso(self.canonical)
        for s in self.steps:
            u = s.cofactor * self.f
            du = exterior_d(u)
            if p_iso_inv(du) != s.delta:
                return False
            total = total + du
        return p_iso_inv(total) == self.original if total else not self.original

    def weights_decreasing(self) -> bool:
        w = [s.weight for s in self.steps]
        return all(a > b for a, b in zip(w, w[1:]))

    def to_json(self) -> dict:
        return {
            "f": str(self.f),
            "original": str(self.original),
            "canonical": str(self.canonical),
            "steps": [
                {
                    "rule": s.tag,
                    "target": _mono_str(s.target),
                    "weight": list(s.weight),
                    "multiplier": form_print(s.multiplier(self.f)),
                    "cofactor": form_print(s.cofactor),
                    "parts": [[t, _mono_str(a)] for t, a in s.parts],
                }
                for s in self.steps
            ],
        }


def _mono_str(exp) -> str:
    parts = []
    for v, k in zip(X3, exp):
        if k == 1:
            parts.append(v)
        elif k > 1:
            parts.append(f"{v}^{k}")
    return "*".join(parts) or "1"


# ---------------------------------------------------------------------------
# rewriting rules
# ---------------------------------------------------------------------------

def _pair(i: int) -> tuple:
    return tuple(k for k in range(3) if k != i)


def _mixed_cofactor(ring, a, tie_break: str) -> DifferentialForm:
    """``x^s dx_{jk}`` with ``x^a = x^s x_j x_k``; ``i`` is the remaining index."""
    zeros = [k for k in range(3) if a[k] == 0]
    if zeros:
        i = zeros[0]
    else:
        i = 0 if tie_break == "default" else 2
    j, k = _pair(i)
    s = list(a)
    s[j] -= 1
    s[k] -= 1
    return DifferentialForm.dx(ring, j, k, coeff=ring.monomial(s))


def _power_cofactor(ring, i: int, a: int) -> DifferentialForm:
    """Cofactor whose exterior derivative isolates ``x_i^a`` in top degree."""
    def mono(**kw):
        e = [0, 0, 0]
        for name, k in kw.items():
            e[int(name[1]) - 1] = k
        return ring.monomial(e)

    if i == 0:
        return (DifferentialForm.dx(ring, 1, 2, coeff=mono(x1=a - 1)) * 2
                + DifferentialForm.dx(ring, 0, 2, coeff=mono(x1=a - 2, x2=1)) * a)
    if i == 1:
        return -(DifferentialForm.dx(ring, 0, 2, coeff=mono(x2=a - 1)) * 2
                 + DifferentialForm.dx(ring, 1, 2, coeff=mono(x2=a - 2, x1=1)) * a)
    return (DifferentialForm.dx(ring, 0, 1, coeff=mono(x3=a - 1)) * 2
            + DifferentialForm.dx(ring, 0, 2, coeff=mono(x3=a - 2, x2=1)) * a)


def _delta(f: Polynomial, g: DifferentialForm) -> Polynomial:
    return p_iso_inv(exterior_d(g * f))


def _rule(a) -> str:
    positive = sum(1 for k in a if k)
    if positive >= 2:
        return "mixed"
    deg = sum(a)
    if deg >= 3:
        return "power"
    if a == (0, 2, 0):
        return "x2-square"
    if a == (0, 0, 2):
        return "x3-square"
    raise NotReducibleError(f"no rewriting rule for monomial {_mono_str(a)}")


def _apply(p: Polynomial, f: Polynomial, g: DifferentialForm, target, zero_msg):
    delta = _delta(f, g)
    w = delta.terms.get(target)
    if not w:
        raise NotReducibleError(zero_msg)
    q = p.terms[target] / w
    return p - delta.scale(q), g * f.ring.constant(q), delta.scale(q)


def _leading_noncanonical(p: Polynomial, order: MonomialOrder):
    best = None
    for e in p.terms:
        if e in CANONICAL:
            continue
        if best is None or order.key(e) > order.key(best):
            best = e
    return best


def reduce_top(
    f,
    w,
    *,
    tie_break: str = "default",
    max_steps: int = 100_000,
) -> tuple:
    """Rewrite the top form ``w`` modulo ``d(f * Omega^2)``.

    Returns ``(canonical, certificate)`` where ``canonical`` is supported on
    ``1, x1, x2, x3, x1^2``.  ``tie_break`` picks the pair of indices used
    for monomials with three positive exponents ("default" or "alt").
    """
    if isinstance(f, Ideal):
        if len(f.generators) != 1:
            raise NonPrincipalError("the fiber ideal must be principal")
        f = f.generators[0]
    ring = f.ring
    if ring.variables != X3:
        ring = x_ring(ring.field)
        f = f.to_ring(ring)
    if isinstance(w, DifferentialForm):
        p = p_iso_inv(w.to_ring(ring) if w.ring != ring else w)
    else:
        p = w.to_ring(ring) if w.ring != ring else w
    if tie_break not in ("default", "alt"):
        raise ValueError("tie_break must be 'default' or 'alt'")
    order = degree_modified_order(ring)
    original = p
    steps = []
    for _ in range(max_steps):
        a = _leading_noncanonical(p, order)
        if a is None:
            break
        tag = _rule(a)
        weight = order.key(a)
        if tag == "mixed":
            g = _mixed_cofactor(ring, a, tie_break)
            p, cof, delta = _apply(p, f, g, a, f"mixed-rule coefficient vanishes at {_mono_str(a)}")
            steps.append(ReductionStep(tag, cof, delta, a, weight, ((tag, a),)))
            continue
        i = next(k for k in range(3) if a[k])
        g = _power_cofactor(ring, i, a[i])
        p, cof, delta = _apply(p, f, g, a, f"power rule coefficient vanishes at {_mono_str(a)}")
        parts = [(tag, a)]
        # same-degree monomials above the target introduced by the power rule
        deg = sum(a)
        while True:
            above = [e for e in p.terms if sum(e) == deg and e not in CANONICAL and order.key(e) > weight]
            if not above:
                break
            e = max(above, key=order.key)
            if _rule(e) != "mixed":
                raise NotReducibleError(f"unexpected pure power {_mono_str(e)} above {_mono_str(a)}")
            g2 = _mixed_cofactor(ring, e, tie_break)
            p, cof2, delta2 = _apply(p, f, g2, e, f"mixed-rule coefficient vanishes at {_mono_str(e)}")
            cof = cof + cof2
            delta = delta + delta2
            parts.append(("mixed", e))
        steps.append(ReductionStep(tag, cof, delta, a, weight, tuple(parts)))
    else:
        raise NotReducibleError(f"rewriting did not terminate within {max_steps} steps")
    return p, ReductionCertificate(f, original, p, tuple(steps))


def canonical_coordinates(p: Polynomial) -> tuple:
    """Coefficients of ``1, x1, x2, x3, x1^2`` in a canonical polynomial."""
    field = p.ring.field
    extra = [e for e in p.terms if e not in CANONICAL]
    if extra:
        raise NotReducibleError(f"{p} is not canonical")
    return tuple(p.terms.get(e, field.zero) for e in CANONICAL)


def class_coordinates(p: Polynomial) -> tuple:
    """Coordinates in the basis ``m * x1 dx{23}`` of the class mapping to ``p dx{123}``."""
    c = canonical_coordinates(p)
    return tuple(v / s for v, s in zip(c, CANONICAL_SCALES))


# ---------------------------------------------------------------------------
# bases
# ---------------------------------------------------------------------------

def basis_class(ring: PolynomialRing, m) -> DifferentialForm:
    """``m * x1 dx{23}`` for an exponent vector ``m``."""
    e = list(m)
    e[0] += 1
    return DifferentialForm.dx(ring, 1, 2, coeff=ring.monomial(e))


def class_label(m) -> str:
    return f"{_mono_str(m)}*x1 dx{{23}}"


@dataclass
class IndependenceWitness:
    independent: bool
    degree_bound: int
    image_rank: int
    candidate_rank: int
    joint_rank: int
    raised: bool = False

    @property
    def intersection_dim(self) -> int:
        return self.image_rank + self.candidate_rank - self.joint_rank

    def to_json(self) -> dict:
        return {
            "independent": self.independent,
            "degree_bound": self.degree_bound,
            "image_rank": self.image_rank,
            "candidate_rank": self.candidate_rank,
            "joint_rank": self.joint_rank,
            "intersection_dim": self.intersection_dim,
            "raised": self.raised,
        }


@dataclass
class CohomologyBasis:
    surface: str
    b: tuple
    classes: list
    monomials: list
    dimension: int
    route: str = "direct"
    witness: IndependenceWitness | None = None
    extra: dict = field(default_factory=dict)

    def labels(self) -> list:
        return [class_label(m) for m in self.monomials]


def _monomials_upto(n: int, d: int):
    if n == 0:
        yield ()
        return
    for k in range(d + 1):
        for rest in _monomials_upto(n - 1, d - k):
            yield (k,) + rest


def _intersection(f: Polynomial, cand: list, bound: int):
    ring = f.ring
    key = degree_modified_order(ring).key
    image = EchelonBasis(key)
    for m in _monomials_upto(3, bound):
        g = ring.monomial(m)
        for K in ((1, 2), (0, 2), (0, 1)):
            v = _delta(f, DifferentialForm.dx(ring, *K, coeff=g))
            if v:
                image.add(dict(v.terms))
    r_image = image.rank
    cands = EchelonBasis(key)
    for c in cand:
        cands.add(dict(c.terms))
    r_cand = cands.rank
    for c in cand:
        image.add(dict(c.terms))
    return r_image, r_cand, image.rank


def independence_check(f: Polynomial, candidates: Sequence, degree_bound: int = 5) -> IndependenceWitness:
    """Do the candidate top forms stay independent modulo a degree-truncated exact space?

    The exact space is spanned by ``d(f * g dx_K)`` over monomials ``g`` of
    degree at most ``degree_bound``.  A nonzero intersection proves a
    relation in cohomology; a zero intersection is evidence of independence
    up to that bound.  The check is repeated at ``degree_bound + 1`` and the
    larger bound wins (with a warning) if the answers differ.
    """
    ring = f.ring
    if ring.variables != X3:
        ring = x_ring(ring.field)
        f = f.to_ring(ring)
    cand = []
    for c in candidates:
        p = p_iso_inv(c) if isinstance(c, DifferentialForm) else c
        cand.append(p.to_ring(ring) if p.ring != ring else p)
    if not cand:
        return IndependenceWitness(True, degree_bound, 0, 0, 0)
    need = max(p.total_degree() for p in cand) + 1
    raised = False
    if degree_bound < need:
        warnings.warn(f"degree bound {degree_bound} is below {need}; using {need}", BoundTooSmallWarning)
        degree_bound, raised = need, True
    r_i, r_c, r_j = _intersection(f, cand, degree_bound)
    r_i2, r_c2, r_j2 = _intersection(f, cand, degree_bound + 1)
    if (r_i + r_c - r_j) != (r_i2 + r_c2 - r_j2):
        warnings.warn(
            f"independence answer changes between bounds {degree_bound} and {degree_bound + 1}",
            BoundTooSmallWarning,
        )
        degree_bound, raised = degree_bound + 1, True
        r_i, r_c, r_j = r_i2, r_c2, r_j2
    independent = r_c == len(cand) and r_i + r_c == r_j
    return IndependenceWitness(independent, degree_bound, r_i, r_c, r_j, raised)


def _orbit_shift(b) -> object | None:
    """For sigma04 parameters whose linear coefficients in u4 vanish, the sigma11 parameter.

    Then ``u4(b) = K - (x1^2+x2^2+x3^2) - x1*x2*x3`` and ``x -> -x`` turns the
    fiber into ``t = K - 2``.
    """
    b1, b2, b3, b4 = b
    if b1 * b2 + b3 * b4 or b1 * b3 + b2 * b4 or b2 * b3 + b1 * b4:
        return None
    K = 4 - b1 * b1 - b2 * b2 - b3 * b3 - b4 * b4 - b1 * b2 * b3 * b4
    return K - 2


def negate_coordinates(p: Polynomial) -> Polynomial:
    """``p(-x)``."""
    ring = p.ring
    return p.substitute({v: -ring.gen(v) for v in ring.variables}, ring)


def top_cohomology_basis(surface: str, b, degree_bound: int = 5, *, check_smooth: bool = True) -> CohomologyBasis:
    """Basis of the top cohomology of a smooth sigma11 or sigma04 fiber."""
    if surface not in ("sigma11", "sigma04"):
        raise ArityError(f"top_cohomology_basis handles sigma11 and sigma04, not {surface}")
    vals = _normalize_params(surface, b)
    if any(v is None for v in vals):
        raise ArityError("top_cohomology_basis needs exact parameter values")
    if check_smooth and not is_smooth_fiber(surface, vals):
        raise SingularFiberError(
            f"the {surface} fiber at b={[str(v) for v in vals]} is singular; use singular_h2_basis"
        )
    ring = x_ring()
    route = "direct"
    f = fiber_polynomial(surface, vals)
    extra = {}
    if surface == "sigma04":
        shift = _orbit_shift(vals)
        if shift is not None:
            t_minus = fiber_polynomial("sigma11", [shift])
            if negate_coordinates(t_minus) == -f:
                route = "x -> -x"
                extra = {"sigma11_parameter": str(shift), "identity": f"u4(b) = -(t(-x) - ({shift}))"}
                f = -negate_coordinates(t_minus)
    monos = list(CANONICAL)
    classes = [basis_class(ring, m) for m in monos]
    images = [_delta(ring.one(), c) for c in classes]
    witness = independence_check(f, images, degree_bound)
    if not witness.independent:
        raise NotReducibleError("canonical classes are dependent; the fiber is not generic")
    return CohomologyBasis(surface, tuple(vals), classes, monos, len(classes), route, witness, extra)


# ---------------------------------------------------------------------------
# singular fibers of sigma11
# ---------------------------------------------------------------------------

def singular_quotient(b) -> tuple:
    """Gröbner basis of ``(f, df/dx1, df/dx2, df/dx3)`` and the standard monomials."""
    ring = x_ring()
    f = fiber_polynomial("sigma11", [b]).to_ring(ring)
    ideal = Ideal(ring, [f] + [f.derivative(v) for v in X3])
    # the fiber order: x3 > x2 > x1 after degree
    order = degree_modified_order(ring)
    gb = buchberger(ideal, order)
    lms = gb.leading_monomials()
    std = []
    for m in _monomials_upto(3, 4):
        if not any(all(x >= y for x, y in zip(m, l)) for l in lms):
            std.append(m)
    std.sort(key=order.key)
    return gb, std


def singular_h2_basis(b) -> CohomologyBasis:
    """Closed classes among ``{1, x1, x2, x3, x1^2} * x1 dx{23}`` on the fiber at ``b = +-2``."""
    b = to_mpq(b)
    if b not in (2, -2):
        raise ArityError("singular_h2_basis takes b = 2 or b = -2")
    ring = x_ring()
    gb, std = singular_quotient(b)
    monos = list(CANONICAL)
    columns = []
    for m in monos:
        c = gb.reduce(_delta(ring.one(), basis_class(ring, m)))
        columns.append(dict(c.terms))
    ker = kernel(columns, one=QQ.one)
    order = degree_modified_order(ring)
    # echelonize the kernel so each vector has a distinct leading class
    classes, leads = [], []
    basis = EchelonBasis(key=lambda i: order.key(monos[i]))
    for k in ker:
        basis.add(k)
    for piv, vec, _ in basis.rows:
        lead = piv
        scale = vec[lead]
        form = DifferentialForm.zero(ring, 2)
        for i, c in vec.items():
            form = form + basis_class(ring, monos[i]) * (c / scale)
        classes.append(form)
        leads.append(monos[lead])
    order_idx = sorted(range(len(leads)), key=lambda i: CANONICAL.index(leads[i]))
    classes = [classes[i] for i in order_idx]
    leads = [leads[i] for i in order_idx]
    extra = {
        "quotient_basis": [_mono_str(m) for m in std],
        "groebner_basis": [str(g) for g in gb.elements],
    }
    return CohomologyBasis("sigma11", (b,), classes, leads, len(classes), "singular", None, extra)

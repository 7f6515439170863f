"""The acceptance suite, shared by ``repderham verify`` and the test-suite.

Each criterion is a function returning ``(passed, detail)``; the runner adds
wall-clock timing and fails any criterion that exceeds its time limit.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np
from gmpy2 import mpq

from .algebra import (
    Ideal,
    MonomialOrder,
    PolynomialRing,
    RationalFunction,
    UPoly,
    buchberger,
    format_rational,
    is_groebner_basis,
    naive_buchberger,
    poly_parse,
)
from .derham import (
    CANONICAL,
    reduce_top,
    singular_h2_basis,
    singular_quotient,
    top_cohomology_basis,
    negate_coordinates,
    degree_modified_order,
    x_ring,
)
from .forms import DifferentialForm, exterior_d, wedge
from .gaussmanin import (
    connection_matrix,
    eta_factorization,
    handwritten_eta,
    partial_fractions,
    rank2_subsystem,
    reference_connection_matrix,
)
from .monodromy import (
    INF,
    PiScalar,
    exact_monodromies,
    local_system_data,
    loop_product,
    monodromy_numeric,
)
from .smoothness import (
    check_points,
    random_parameter,
    singular_locus,
    singular_locus_slice,
)
from .varieties import T_TEXT, fiber_ideal, fiber_polynomial

SEED = 20240601


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str
    elapsed: float
    limit: float | None

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        lim = f" (limit {self.limit:g}s)" if self.limit else ""
        return f"[{mark}] {self.number:2d} {self.title}: {self.detail} [{self.elapsed:.2f}s{lim}]"


@dataclass(frozen=True)
class Criterion:
    number: int
    title: str
    limit: float | None
    check: Callable[..., tuple]

    def run(self, **options) -> CriterionResult:
        t0 = time.monotonic()
        try:
            ok, detail = self.check(**options)
        except Exception as exc:  # a crash is a failure, reported with its type
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        elapsed = time.monotonic() - t0
        if self.limit is not None and elapsed > self.limit:
            ok, detail = False, f"{detail}; over the time limit"
        return CriterionResult(self.number, self.title, ok, detail, elapsed, self.limit)


# ---------------------------------------------------------------------------
# frozen reference data
# ---------------------------------------------------------------------------

B2_GROEBNER = (
    "-4 + x1^2", "x1*x2 - 2*x3", "-4 + x2^2", "-2*x2 + x1*x3", "-2*x1 + x2*x3", "-4 + x3^2",
)
A_PLUS2 = ((mpq(-1, 2), mpq(1, 6)), (mpq(-6), mpq(2)))
A_MINUS2 = ((mpq(3, 2), mpq(-1, 6)), (mpq(0), mpq(0)))
A_INF = ((mpq(-1), mpq(0)), (mpq(6), mpq(-2)))


def _as_set(polys, order) -> set:
    return {p.monic(order) for p in polys}


# ---------------------------------------------------------------------------
# criteria
# ---------------------------------------------------------------------------

def c1_sigma11_locus(**_) -> tuple:
    res = singular_locus("sigma11")
    expected = poly_parse("b^2 - 4", PolynomialRing(("b",)))
    ok = res.psi is not None and res.psi == expected.to_ring(res.psi.ring)
    return ok, f"psi = {res.psi}"


def c2_singular_groebner(**_) -> tuple:
    ring = x_ring()
    order = degree_modified_order(ring)
    gb2, _ = singular_quotient(2)
    want2 = _as_set([ring.parse(s) for s in B2_GROEBNER], order)
    gbm2, _ = singular_quotient(-2)
    wantm2 = _as_set([ring.parse(s) for s in ("x1", "x2", "x3")], order)
    ok2 = _as_set(gb2.elements, order) == want2
    okm2 = _as_set(gbm2.elements, order) == wantm2
    return ok2 and okm2, f"b=2 six generators {'match' if ok2 else 'differ'}; b=-2 {'match' if okm2 else 'differ'}"


def c3_smooth_h2(*, certificates: int = 20, **_) -> tuple:
    rng = random.Random(SEED)
    ring = x_ring()
    details = []
    ok = True
    for b in (0, 1, 5, -3):
        basis = top_cohomology_basis("sigma11", [b])
        good = basis.dimension == 5 and list(basis.monomials) == list(CANONICAL)
        f = fiber_polynomial("sigma11", [b]).to_ring(ring)
        replayed = 0
        for _ in range(certificates):
            deg = rng.randint(0, 6)
            a = rng.randint(0, deg)
            c = rng.randint(0, deg - a)
            w = ring.monomial((a, c, deg - a - c))
            _, cert = reduce_top(f, w)
            if cert.replay() and cert.weights_decreasing():
                replayed += 1
        good = good and replayed == certificates
        ok = ok and good
        details.append(f"b={b}: dim {basis.dimension}, {replayed}/{certificates} replayed")
    return ok, "; ".join(details)


def c4_singular_h2(**_) -> tuple:
    m2 = singular_h2_basis(-2)
    p2 = singular_h2_basis(2)
    want_m2 = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (2, 0, 0)]
    ok = list(m2.monomials) == want_m2 and list(p2.monomials) == [(2, 0, 0)]
    return ok, f"b=-2 dim {m2.dimension} {m2.labels()}; b=2 dim {p2.dimension} {p2.labels()}"


def c5_eta(**_) -> tuple:
    printed = handwritten_eta().wedge_dt_identity()
    built = eta_factorization().wedge_dt_identity()
    return printed and built, f"printed eta {printed}, constructed eta {built}"


def c6_connection(**_) -> tuple:
    E = connection_matrix()
    same = E == reference_connection_matrix()
    same_built = connection_matrix(eta_factorization()) == E
    sizes = sorted(len(b) for b in E.blocks())
    ok = same and same_built and sizes == [1, 1, 1, 2]
    return ok, f"matches reference {same}, eta-independent {same_built}, blocks {sizes}"


def c7_residues(**_) -> tuple:
    E = rank2_subsystem(connection_matrix())
    data = local_system_data(E)
    r = data.residues
    ok = r[mpq(2)] == A_PLUS2 and r[mpq(-2)] == A_MINUS2 and r[INF] == A_INF
    spectra = {p: set(v) for p, v in data.eigenvalues.items()}
    ok = ok and spectra[mpq(2)] == {0, mpq(3, 2)} and spectra[mpq(-2)] == {0, mpq(3, 2)}
    ok = ok and spectra[INF] == {-1, -2}
    shown = ", ".join(
        f"{p}: {{{', '.join(format_rational(x) for x in sorted(v))}}}" for p, v in spectra.items()
    )
    return ok, f"spectra {shown}"


def c8_monodromy(*, steps: int = 256, **_) -> tuple:
    E = rank2_subsystem(connection_matrix())
    exact = exact_monodromies(E)
    ok = True
    notes = []
    for p in (mpq(-2), mpq(2)):
        m = exact[p]
        ev = sorted(np.round(m.eigenvalues().real, 12))
        good = m.exact and m.det() == PiScalar(-1) and m.trace() == PiScalar(0) and ev == [-1.0, 1.0]
        ok = ok and good
    n_inf = exact[INF]
    good_inf = n_inf.exact and n_inf.is_unipotent() and not n_inf.is_identity() and n_inf.trace() == PiScalar(2)
    ok = ok and good_inf
    notes.append(f"N_inf = {[[str(x) for x in r] for r in n_inf.matrix]}")
    loops = {mpq(-2): (-2, 1.0), mpq(2): (2, 1.0), INF: (0, 10.0)}
    worst = 0.0
    for p, (c, rad) in loops.items():
        num = monodromy_numeric(E, c, rad, steps)
        ex = exact[p]
        worst = max(worst, abs(num.trace() - complex(ex.trace())), abs(num.det() - complex(ex.det())))
    ok = ok and worst < 1e-6
    lp = loop_product(E, steps=steps)
    ok = ok and lp.residual < 1e-5
    notes.append(f"trace/det gap {worst:.1e}, loop product residual {lp.residual:.1e}")
    return ok, "; ".join(notes)


def c9_sigma04_point(**_) -> tuple:
    ring = x_ring()
    ideal = fiber_ideal("sigma04", [1, 0, 0, 0])
    gens = [g.to_ring(ring) for g in ideal.generators]
    t = ring.parse(T_TEXT)
    target = negate_coordinates(t) - ring.one()
    ideal_ok = len(gens) == 1 and (gens[0] == target or gens[0] == -target)
    basis = top_cohomology_basis("sigma04", [1, 0, 0, 0])
    h2_ok = basis.dimension == 5 and list(basis.monomials) == list(CANONICAL)
    return ideal_ok and h2_ok, f"ideal = (t(-x) - 1) up to sign: {ideal_ok}; dim {basis.dimension} via {basis.route}"


def _sigma04_points(rng) -> list:
    pts = [random_parameter(rng, "sigma04") for _ in range(36)]
    for k in range(7):
        p = list(random_parameter(rng, "sigma04"))
        p[k % 4] = mpq(2 if k % 2 else -2)
        pts.append(tuple(p))
    for k in range(7):
        a = mpq(rng.randint(-5, 5), rng.randint(1, 3))
        pts.append((a, a, a, a))
    return pts


def c10_sigma04_locus(*, threads: int = 1, **_) -> tuple:
    rng = random.Random(SEED)
    pts = _sigma04_points(rng)
    checks = check_points("sigma04", pts, threads)
    agree = sum(c.agrees for c in checks)
    on = sum(c.psi_value == 0 for c in checks)
    slices = [singular_locus_slice("sigma04", f) for f in ((0, 0, 0), (3, 5, 7))]
    sl_ok = all(s.matches and not s.degenerate for s in slices)
    ok = agree == len(pts) and sl_ok
    return ok, f"{agree}/{len(pts)} points agree ({on} on the locus); slices match {sl_ok}"


def _sigma12_points(rng) -> list:
    pts = [random_parameter(rng, "sigma12") for _ in range(35)]
    for k in range(5):
        a = mpq(rng.randint(-7, 7), rng.randint(1, 3))
        pts += [(mpq(2 if k % 2 else -2), a), (a, mpq(-2 if k % 2 else 2)), (a, a)]
    return pts


SIGMA12_SLICES = ((mpq(0),), (mpq(1, 2),), (mpq(3),))


def c11_sigma12_locus(*, threads: int = 1, full_budget: float = 1800.0, **_) -> tuple:
    from .algebra import BudgetExceeded
    from .smoothness import radical_psi

    rng = random.Random(SEED)
    pts = _sigma12_points(rng)
    # pointwise: Jacobian minors at exact points against psi
    checks = check_points("sigma12", pts, threads)
    agree = sum(c.agrees for c in checks)
    on = sum(c.psi_value == 0 for c in checks)
    ok = agree == len(pts)
    detail = f"{agree}/{len(pts)} points agree ({on} on the locus)"
    # symbolic: rank-drop charts eliminated to the parameters
    try:
        res = singular_locus("sigma12", budget_seconds=full_budget)
    except BudgetExceeded as exc:
        ok = False
        detail += f"; full elimination over budget ({exc.state.summary()['pairs_done']} pairs)"
    else:
        want = radical_psi("sigma12").to_ring(res.psi.ring) if res.psi is not None else None
        good = want is not None and res.psi in (want, -want)
        ok = ok and good
        detail += f"; full elimination {'= rad psi' if good else 'differs'} in {res.elapsed:.1f}s"
    slices = [singular_locus_slice("sigma12", f) for f in SIGMA12_SLICES]
    sl_ok = all(s.matches and not s.degenerate for s in slices)
    ok = ok and sl_ok
    detail += f"; 3 slices match {sl_ok}"
    return ok, detail


def _random_poly(rng, ring, terms=3, deg=2, size=5):
    out = ring.zero()
    for _ in range(rng.randint(1, terms)):
        e = tuple(rng.randint(0, deg) for _ in range(ring.nvars))
        out = out + ring.monomial(e, rng.randint(-size, size))
    return out


def _random_form(rng, ring, degree):
    comps = {}
    from itertools import combinations

    for K in combinations(range(ring.nvars), degree):
        if rng.random() < 0.6:
            comps[K] = _random_poly(rng, ring)
    return DifferentialForm(ring, degree, comps)


def _random_rational(rng, var="t") -> RationalFunction:
    roots = [mpq(rng.randint(-4, 4), rng.randint(1, 2)) for _ in range(rng.randint(1, 3))]
    den = UPoly([1])
    for r in roots:
        den = den * UPoly([-r, 1]) ** rng.randint(1, 2)
    num = UPoly([mpq(rng.randint(-6, 6), rng.randint(1, 3)) for _ in range(rng.randint(1, den.degree + 3))])
    return RationalFunction(num, den, var)


def c12_properties(*, samples: int = 100, **_) -> tuple:
    rng = random.Random(SEED)
    ring3 = PolynomialRing(("x", "y", "z"))
    gb_ok = 0
    for k in range(samples):
        gens = [_random_poly(rng, ring3) for _ in range(rng.randint(1, 3))]
        gens = [g for g in gens if g] or [ring3.gen("x")]
        order = MonomialOrder.grevlex(ring3) if k % 2 else MonomialOrder.lex(ring3)
        ideal = Ideal(ring3, gens)
        gb = buchberger(ideal, order)
        if tuple(gb.elements) == naive_buchberger(ideal, order) and is_groebner_basis(gb.elements, order):
            gb_ok += 1
    xr = x_ring()
    forms_ok = 0
    for _ in range(samples):
        p, q = rng.randint(0, 2), rng.randint(0, 1)
        a, b = _random_form(rng, xr, p), _random_form(rng, xr, q)
        sign = -1 if p % 2 else 1
        leibniz = exterior_d(wedge(a, b)) == wedge(exterior_d(a), b) + wedge(a, exterior_d(b)) * sign
        if not exterior_d(exterior_d(a)) and leibniz:
            forms_ok += 1
    cert_ok = 0
    for _ in range(samples):
        b = mpq(rng.randint(-9, 9), rng.randint(1, 3))
        if b in (2, -2):
            b += 1
        f = fiber_polynomial("sigma11", [b]).to_ring(xr)
        w = _random_poly(rng, xr, terms=3, deg=3)
        _, cert = reduce_top(f, w)
        if cert.replay() and cert.weights_decreasing():
            cert_ok += 1
    pf_ok = 0
    for _ in range(samples):
        r = _random_rational(rng)
        if partial_fractions(r).reassemble() == r:
            pf_ok += 1
    ok = gb_ok == forms_ok == cert_ok == pf_ok == samples
    return ok, f"groebner {gb_ok}, forms {forms_ok}, certificates {cert_ok}, partial fractions {pf_ok} of {samples}"


CRITERIA = (
    Criterion(1, "sigma11 singular locus", 10, c1_sigma11_locus),
    Criterion(2, "singular fibers Groebner data", 5, c2_singular_groebner),
    Criterion(3, "smooth H2 with certificates", 30, c3_smooth_h2),
    Criterion(4, "singular H2", 10, c4_singular_h2),
    Criterion(5, "eta identity", None, c5_eta),
    Criterion(6, "connection matrix", 60, c6_connection),
    Criterion(7, "residues and spectra", None, c7_residues),
    Criterion(8, "monodromy", 60, c8_monodromy),
    Criterion(9, "sigma04 fiber at (1,0,0,0)", 30, c9_sigma04_point),
    Criterion(10, "sigma04 singular locus", 900, c10_sigma04_locus),
    Criterion(11, "sigma12 singular locus", None, c11_sigma12_locus),
    Criterion(12, "property suites", 300, c12_properties),
)


def run_all(only=None, **options) -> list:
    return [c.run(**options) for c in CRITERIA if only is None or c.number in only]

import itertools

import pytest
from gmpy2 import mpq
from hypothesis import assume, given, settings

from repderham.algebra import Ideal, PolynomialRing, RationalFunctionField
from repderham.algebra.linalg import solve
from repderham.derham import (
    CANONICAL,
    BoundTooSmallWarning,
    NonPrincipalError,
    SingularFiberError,
    basis_class,
    class_coordinates,
    class_label,
    degree_modified_order,
    independence_check,
    reduce_top,
    singular_h2_basis,
    singular_quotient,
    top_cohomology_basis,
    x_ring,
)
from repderham.forms import DifferentialForm, exterior_d, p_iso_inv
from repderham.varieties import fiber_polynomial
from strategies import polynomials, rationals

R = x_ring()
x1, x2, x3 = R.gens()


def fiber(b):
    return fiber_polynomial("sigma11", [b]).to_ring(R)


def exact_span_oracle(f, bound):
    """Columns d(f * x^m dx_K) for |m| <= bound, written out directly."""
    cols = []
    for m in itertools.product(range(bound + 1), repeat=3):
        if sum(m) > bound:
            continue
        for K in ((1, 2), (0, 2), (0, 1)):
            u = DifferentialForm(f.ring, 2, {K: f * f.ring.monomial(m)})
            cols.append(dict(p_iso_inv(exterior_d(u)).terms))
    return cols


def is_exact_multiple(f, p, bound):
    return solve(exact_span_oracle(f, bound), dict(p.terms)) is not None or not p


def test_quadratic_rewrites():
    f = fiber(0)
    assert reduce_top(f, x2 ** 2)[0] == x1 ** 2
    assert reduce_top(f, x3 ** 2)[0] == x1 ** 2


def test_triple_product_value_and_oracle():
    f = fiber(0)
    canon, cert = reduce_top(f, x1 * x2 * x3)
    assert canon == x1 ** 2 * mpq(5, 2) - 1
    assert cert.replay() and cert.weights_decreasing()
    assert cert.steps[0].tag == "mixed"
    assert is_exact_multiple(f, x1 * x2 * x3 - canon, 2)


def test_triple_product_symbolic_b():
    F = RationalFunctionField("b")
    ring = PolynomialRing(("x1", "x2", "x3"), F)
    f = ring.parse("-2 + x1^2 + x2^2 - x1*x2*x3 + x3^2 - b")
    canon, cert = reduce_top(f, ring.parse("x1*x2*x3"))
    b = F.gen
    assert canon == ring.gen("x1") ** 2 * mpq(5, 2) + ring.constant(-b / 2 - 1)
    assert cert.replay()


@pytest.mark.parametrize("b", [0, 1, mpq(-7, 3)])
def test_low_degree_reductions_agree_with_linear_algebra(b):
    f = fiber(b)
    for m in itertools.product(range(4), repeat=3):
        if sum(m) > 3:
            continue
        w = R.monomial(m)
        canon, cert = reduce_top(f, w)
        assert cert.replay()
        assert is_exact_multiple(f, w - canon, 3)


def test_confluence_and_certificates_up_to_degree_six():
    f = fiber(mpq(1, 3))
    for m in itertools.product(range(7), repeat=3):
        if sum(m) > 6:
            continue
        w = R.monomial(m)
        c1, cert1 = reduce_top(f, w)
        c2, cert2 = reduce_top(f, w, tie_break="alt")
        assert c1 == c2
        assert cert1.replay() and cert1.weights_decreasing()
        assert cert2.replay() and cert2.weights_decreasing()


@settings(max_examples=30)
@given(rationals, polynomials(R, max_terms=4, deg=4))
def test_certificate_soundness(b, w):
    assume(b not in (2, -2))
    f = fiber(b)
    canon, cert = reduce_top(f, w)
    assert all(e in CANONICAL for e in canon.terms)
    assert cert.replay() and cert.weights_decreasing()
    assert is_exact_multiple(f, w - canon, w.total_degree() + 1) if w else canon == w


def test_canonical_is_fixed_point():
    f = fiber(5)
    w = R.parse("3 - x1 + 2*x2 + x3 - 4*x1^2")
    canon, cert = reduce_top(f, w)
    assert canon == w and cert.steps == ()


def test_certificate_json_shape():
    _, cert = reduce_top(fiber(0), x1 ** 4)
    js = cert.to_json()
    assert js["steps"][0]["rule"] == "power"
    assert {"rule", "target", "weight", "multiplier", "cofactor", "parts"} <= set(js["steps"][0])


def test_non_principal_rejected():
    with pytest.raises(NonPrincipalError):
        reduce_top(Ideal(R, [x1, x2]), x3)


def test_class_coordinates_scales():
    # d(m x1 dx23) = (m x1)' dx123: 1, 2 x1, x2, x3, 3 x1^2
    for m, scale in zip(CANONICAL, (1, 2, 1, 1, 3)):
        top = p_iso_inv(exterior_d(basis_class(R, m)))
        coords = class_coordinates(top)
        assert coords == tuple(mpq(1) if e == m else mpq(0) for e in CANONICAL)
        assert top.terms[m] == scale
    assert class_label((2, 0, 0)) == "x1^2*x1 dx{23}"


@pytest.mark.parametrize("b", [0, 1, 5, -3])
def test_smooth_basis(b):
    basis = top_cohomology_basis("sigma11", [b])
    assert basis.dimension == 5
    assert list(basis.monomials) == list(CANONICAL)
    assert basis.witness.independent


@settings(max_examples=10)
@given(rationals)
def test_smooth_basis_uniform_in_b(b):
    assume(b not in (2, -2))
    assert top_cohomology_basis("sigma11", [b]).dimension == 5


def test_sigma04_bases():
    basis = top_cohomology_basis("sigma04", [1, 0, 0, 0])
    assert basis.dimension == 5 and basis.route == "x -> -x"
    assert basis.extra["sigma11_parameter"] == "1"
    assert top_cohomology_basis("sigma04", [3, 1, 0, 7]).route == "direct"


def test_singular_fiber_rejected():
    with pytest.raises(SingularFiberError):
        top_cohomology_basis("sigma11", [2])


def images(ms):
    return [p_iso_inv(exterior_d(basis_class(R, m))) for m in ms]


def test_independence_examples():
    f = fiber(0)
    assert independence_check(f, images(CANONICAL), degree_bound=4).independent
    assert not independence_check(f, [x1 ** 2, x2 ** 2]).independent
    assert independence_check(f, []).independent


def test_independence_raises_small_bound():
    with pytest.warns(BoundTooSmallWarning):
        w = independence_check(fiber(0), [x1 ** 2], degree_bound=1)
    assert w.raised and w.degree_bound >= 3


def test_singular_h2_minus_two():
    basis = singular_h2_basis(-2)
    assert basis.dimension == 4
    assert basis.extra["quotient_basis"] == ["1"]
    assert list(basis.monomials) == [(1, 0, 0), (0, 1, 0), (0, 0, 1), (2, 0, 0)]


def test_singular_h2_plus_two():
    basis = singular_h2_basis(2)
    assert basis.dimension == 1 and basis.labels() == ["x1^2*x1 dx{23}"]
    (cls,) = basis.classes
    assert cls == DifferentialForm.dx(R, 1, 2, coeff=x1 ** 3 - 12 * x1)
    # closed on the fiber: d(cls) lies in (f, df)
    gb, std = singular_quotient(2)
    assert not gb.reduce(p_iso_inv(exterior_d(cls)))
    assert std == [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)]
    assert basis.extra["quotient_basis"] == ["1", "x1", "x2", "x3"]


def test_singular_quotient_order():
    gb, _ = singular_quotient(-2)
    order = degree_modified_order(R)
    assert set(gb.elements) == {x1, x2, x3}
    assert gb.order == order


def test_exact_span_oracle_rejects_canonical_monomials():
    f = fiber(0)
    for m in CANONICAL:
        assert not is_exact_multiple(f, R.monomial(m), 3)

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from repderham.algebra import (
    BudgetExceeded,
    Ideal,
    MonomialOrder,
    OrderError,
    PolynomialRing,
    buchberger,
    divide,
    eliminate,
    is_groebner_basis,
    is_reduced,
    lift,
    naive_buchberger,
    reduce_mod,
    s_polynomial,
)
from repderham.derham import degree_modified_order
from repderham.smoothness import fiber_jacobian
from repderham.varieties import ELIM_VARIABLES, ELIM_WEIGHTS, T_TEXT, elimination_order
from strategies import RING3, polynomials, rationals

R = RING3
x1, x2, x3 = R.gens()
R4 = PolynomialRing(("w", "x", "y", "z"))
ORDERS3 = [MonomialOrder.lex(R), MonomialOrder.grevlex(R), degree_modified_order(R)]


def test_divide_simple_and_unit():
    (q,), r = divide(x1 ** 2, [x1], MonomialOrder.grevlex(R))
    assert q == x1 and not r
    p = R.parse("x1^3*x2 - 7*x3 + 2")
    _, r = divide(p, [R.one()], MonomialOrder.grevlex(R))
    assert not r


def test_divide_by_partials_leaves_remainder():
    ring = PolynomialRing(("x3", "x2", "x1"))
    order = elimination_order("sigma11", ring)
    t = ring.parse(T_TEXT)
    partials = [t.derivative(v) for v in ("x1", "x2", "x3")]
    qs, r = divide(t - ring.constant(2), partials, order)
    assert r
    assert sum((q * d for q, d in zip(qs, partials)), ring.zero()) + r == t - ring.constant(2)


@given(polynomials(), st.lists(polynomials(max_terms=3, deg=2), min_size=1, max_size=3), st.sampled_from(ORDERS3))
def test_division_identity(p, divisors, order):
    divisors = [d for d in divisors if d] or [x1]
    qs, r = divide(p, divisors, order)
    assert sum((q * d for q, d in zip(qs, divisors)), R.zero()) + r == p
    lms = [d.leading_monomial(order) for d in divisors]
    for e in r.terms:
        assert not any(all(a >= b for a, b in zip(e, lm)) for lm in lms)


def test_principal_monomial_ideal():
    gb = buchberger(Ideal(R, [x1]), MonomialOrder.grevlex(R))
    assert gb.elements == (x1,)


def test_reduce_mod_examples():
    gb = buchberger(Ideal(R, [x1, x2, x3]), MonomialOrder.grevlex(R))
    assert reduce_mod(gb, x1 * x2 + 7) == R.constant(7)
    jac = fiber_jacobian("sigma11", [2])
    gb2 = buchberger(jac.ideal, degree_modified_order(jac.ideal.ring))
    x2b = jac.ideal.ring.gen("x2")
    assert reduce_mod(gb2, x2b ** 2) == jac.ideal.ring.constant(4)
    for g in gb2.ideal.generators:
        assert not reduce_mod(gb2, g)


def test_singular_fiber_bases():
    order = degree_modified_order(R)
    six = {R.parse(s).monic(order) for s in (
        "x1^2 - 4", "x1*x2 - 2*x3", "x2^2 - 4", "x1*x3 - 2*x2", "x2*x3 - 2*x1", "x3^2 - 4")}
    gb = buchberger(fiber_jacobian("sigma11", [2]).ideal, order)
    assert set(gb.elements) == six
    gb = buchberger(fiber_jacobian("sigma11", [-2]).ideal, order)
    assert set(gb.elements) == {x1, x2, x3}


@st.composite
def small_ideals(draw):
    ring = draw(st.sampled_from([R, R4]))
    gens = draw(st.lists(polynomials(ring, max_terms=3, deg=2), min_size=1, max_size=3))
    gens = [g for g in gens if g] or [ring.gens()[0]]
    order = draw(st.sampled_from([MonomialOrder.lex(ring), MonomialOrder.grevlex(ring)]))
    return Ideal(ring, gens), order


@settings(max_examples=40)
@given(small_ideals())
def test_buchberger_matches_naive_oracle(data):
    ideal, order = data
    gb = buchberger(ideal, order)
    assert tuple(gb.elements) == naive_buchberger(ideal, order)
    assert is_groebner_basis(gb.elements, order) and is_reduced(gb.elements, order)
    for g in ideal.generators:
        assert not reduce_mod(gb, g)
    for i, f in enumerate(gb.elements):
        for g in gb.elements[i + 1:]:
            assert not reduce_mod(gb, s_polynomial(f, g, order))


@st.composite
def ideals3(draw):
    gens = draw(st.lists(polynomials(max_terms=3, deg=2), min_size=1, max_size=3))
    gens = [g for g in gens if g] or [x1]
    return Ideal(R, gens), draw(st.sampled_from(ORDERS3))


@settings(max_examples=30)
@given(ideals3(), polynomials(max_terms=3), polynomials(max_terms=3), rationals, rationals)
def test_reduce_mod_idempotent_and_linear(data, p, q, a, c):
    ideal, order = data
    gb = buchberger(ideal, order)
    rp, rq = reduce_mod(gb, p), reduce_mod(gb, q)
    assert reduce_mod(gb, rp) == rp
    assert reduce_mod(gb, p.scale(a) + q.scale(c)) == rp.scale(a) + rq.scale(c)


def test_eliminate_examples():
    ring = PolynomialRing(("x", "b"))
    order = MonomialOrder.lex(ring)
    x, b = ring.gens()
    assert eliminate(Ideal(ring, [x - b]), order, ["b"]) == []
    assert eliminate(Ideal(ring, [x - b, x - 2]), order, ["b"]) == [b - 2]
    with pytest.raises(OrderError):
        # lex with b > x does not eliminate x
        eliminate(Ideal(ring, [x - b]), MonomialOrder(ring, [(0, 1), (1, 0)]), ["b"])


def test_eliminate_sigma11():
    ring = PolynomialRing(ELIM_VARIABLES["sigma11"])
    order = MonomialOrder(ring, ELIM_WEIGHTS["sigma11"])
    t = ring.parse(T_TEXT) - ring.gen("b")
    ideal = Ideal(ring, [t] + [t.derivative(v) for v in ("x1", "x2", "x3")])
    assert eliminate(ideal, order, ["b"]) == [ring.parse("b^2 - 4")]


def test_budget_and_resume():
    ring = PolynomialRing(("x", "y", "z"))
    ideal = Ideal(ring, [ring.parse(s) for s in ("x^2*y - z^3", "x*y^2 - x*z + 1", "y^3 - x*z^2")])
    order = MonomialOrder.grevlex(ring)
    fresh = buchberger(ideal, order)
    with pytest.raises(BudgetExceeded) as info:
        buchberger(ideal, order, budget_seconds=0.0)
    state = info.value.state
    assert "pairs_remaining" in state.summary()
    resumed = buchberger(ideal, order, state=state)
    assert resumed.elements == fresh.elements


def test_lift_cofactors():
    order = MonomialOrder.grevlex(R)
    gens = [x1 * x2 - x3, x2 ** 2 - 1]
    p = (x1 + 3) * gens[0] - x3 * gens[1]
    cof = lift(gens, p, order)
    assert sum((c * g for c, g in zip(cof, gens)), R.zero()) == p
    assert lift(gens, x1, order) is None

import random

import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from repderham.algebra import BudgetExceeded, Ideal, MonomialOrder, PolynomialRing, buchberger
from repderham.smoothness import (
    DegenerateSliceWarning,
    check_points,
    fiber_jacobian,
    intersect_eliminants,
    is_smooth_fiber,
    jacobian_ideal,
    radical_psi,
    random_parameter,
    rank_drop_charts,
    singular_locus,
    singular_locus_slice,
)
from repderham.varieties import T_TEXT, psi_eval
from strategies import rationals

R = PolynomialRing(("x1", "x2", "x3", "b"))


def test_principal_jacobian_is_partials():
    t = R.parse(T_TEXT) - R.gen("b")
    jac = jacobian_ideal(Ideal(R, [t]), 1, ("x1", "x2", "x3"))
    want = [t, R.parse("2*x1 - x2*x3"), R.parse("2*x2 - x3*x1"), R.parse("2*x3 - x1*x2")]
    assert list(jac.ideal.generators) == want
    assert jac.minor_count == 3


def test_circle():
    ring = PolynomialRing(("x1", "x2"))
    jac = jacobian_ideal(Ideal(ring, [ring.parse("x1^2 + x2^2 - 1")]), 1)
    assert list(jac.ideal.generators) == [ring.parse("x1^2 + x2^2 - 1"), ring.parse("2*x1"), ring.parse("2*x2")]


def test_sigma12_minor_count():
    jac = fiber_jacobian("sigma12", [0, 1])
    assert jac.minor_count == 15
    assert len(jac.ideal.generators) == 2 + sum(1 for m in jac.minors if m)


@given(st.integers(1, 3))
def test_principal_minor_count_equals_variables(n):
    ring = PolynomialRing(tuple(f"y{i}" for i in range(n)))
    f = sum((g ** 2 for g in ring.gens()), ring.zero()) + ring.one()
    assert jacobian_ideal(Ideal(ring, [f]), 1).minor_count == n


@pytest.mark.parametrize("surface,b,smooth", [
    ("sigma11", [0], True), ("sigma11", [2], False), ("sigma11", [-2], False),
    ("sigma12", [0, 0], False), ("sigma12", [0, 1], True), ("sigma04", [1, 0, 0, 0], True),
    ("sigma04", [1, 1, 1, 1], False),
])
def test_smoothness_examples(surface, b, smooth):
    assert is_smooth_fiber(surface, b) is smooth


@settings(max_examples=40)
@given(rationals)
def test_sigma11_biconditional(b):
    assert is_smooth_fiber("sigma11", [b]) == (psi_eval("sigma11", [b]) != 0)


@settings(max_examples=40)
@given(st.tuples(rationals, rationals, rationals, rationals))
def test_sigma04_biconditional(b):
    assert is_smooth_fiber("sigma04", list(b)) == (psi_eval("sigma04", list(b)) != 0)


def test_sigma04_biconditional_on_locus():
    rng = random.Random(3)
    pts = [(a, a, a, a) for a in (mpq(1, 2), mpq(-3), mpq(5, 3))]
    pts += [(mpq(2), *random_parameter(rng, "sigma04")[1:]) for _ in range(3)]
    for c in check_points("sigma04", pts):
        assert c.psi_value == 0 and not c.smooth


@pytest.mark.slow
def test_sigma12_biconditional_mixed_points():
    rng = random.Random(11)
    pts = [random_parameter(rng, "sigma12") for _ in range(6)]
    pts += [(mpq(2), mpq(1, 3)), (mpq(-5, 2), mpq(-2)), (mpq(3, 4), mpq(3, 4))]
    checks = check_points("sigma12", pts, threads=2)
    assert [c.b for c in checks] == [tuple(p) for p in pts]
    assert all(c.agrees for c in checks)
    assert sum(not c.smooth for c in checks) >= 3


def test_singular_locus_sigma11():
    res = singular_locus("sigma11")
    assert res.psi == PolynomialRing(("b",)).parse("b^2 - 4")
    assert res.psi.primitive() == res.psi


def test_singular_locus_budget():
    with pytest.raises(BudgetExceeded) as info:
        singular_locus("sigma12", budget_seconds=0.2, method="minors")
    assert info.value.state.summary()["basis_size"] >= 0


def test_slices_sigma04():
    s = singular_locus_slice("sigma04", (0, 0, 0))
    assert s.matches and not s.degenerate
    assert s.squarefree.monic().to_str("b1") == "b1^3 - 4*b1"
    s = singular_locus_slice("sigma04", (3, 5, 7))
    assert s.matches and s.squarefree.degree == 6


def test_slices_sigma12():
    for fixed in ((mpq(0),), (mpq(3),)):
        s = singular_locus_slice("sigma12", fixed)
        assert s.matches and not s.degenerate


def test_slice_arity():
    from repderham.varieties import ArityError

    with pytest.raises(ArityError):
        singular_locus_slice("sigma04", (0, 0))


def test_missing_slice_flagged(monkeypatch):
    # force a constant eliminant, as for a slice that misses the locus
    from repderham import smoothness

    monkeypatch.setattr(smoothness, "eliminate", lambda ideal, *a, **k: [ideal.ring.one()])
    with pytest.warns(DegenerateSliceWarning, match="a constant"):
        res = singular_locus_slice("sigma04", (0, 0, 0))
    assert res.degenerate and not res.matches


@pytest.mark.parametrize("b2", [2, -2])
def test_everywhere_singular_slice_flagged(b2):
    # psi vanishes identically on b2 = +-2, so the eliminant is zero
    with pytest.warns(DegenerateSliceWarning, match="no nonzero"):
        res = singular_locus_slice("sigma12", (b2,))
    assert res.degenerate and not res.generator
    assert not res.expected_squarefree


def test_single_chart_is_jacobian_ideal():
    t = R.parse(T_TEXT) - R.gen("b")
    (chart,) = rank_drop_charts(Ideal(R, [t]), ("x1", "x2", "x3"))
    jac = jacobian_ideal(Ideal(R, [t]), 1, ("x1", "x2", "x3"))
    assert list(chart.generators) == list(jac.ideal.generators)


def test_two_generator_charts():
    ring = PolynomialRing(("x", "y", "z"))
    g1, g2 = ring.parse("x^2 + y^2 + z^2 - 1"), ring.parse("z")
    charts = rank_drop_charts(Ideal(ring, [g1, g2]), ring.variables)
    assert [c.ring.variables for c in charts] == [("x", "y", "z", "lam1")] * 2
    first, second = charts
    # chart 1: grad g1 = 0; chart 2: grad g2 + lam1 grad g1 = 0
    assert len(first.generators) == 2 + 3
    assert second.generators[-1] == second.ring.parse("1 + 2*lam1*z")


def test_circle_on_plane_is_smooth_by_both_routes():
    ring = PolynomialRing(("x", "y", "z"))
    ideal = Ideal(ring, [ring.parse("x^2 + y^2 + z^2 - 1"), ring.parse("z")])
    for chart in rank_drop_charts(ideal, ring.variables):
        assert buchberger(chart, MonomialOrder.grevlex(chart.ring)).is_unit()
    jac = jacobian_ideal(ideal, 2)
    assert buchberger(jac.ideal, MonomialOrder.grevlex(ring)).is_unit()


def test_intersect_eliminants():
    ring = PolynomialRing(("a", "b"))
    a, b = ring.gens()
    out = intersect_eliminants([[a * (b - 1)], [b - 1], [a + b]], ring)
    assert len(out) == 1
    assert out[0] in (a * (b - 1) * (a + b), -(a * (b - 1) * (a + b)))


def test_sigma12_full_elimination_by_charts():
    res = singular_locus("sigma12")
    assert res.extra["method"] == "charts"
    want = radical_psi("sigma12")
    assert res.psi in (want, -want)
    assert [len(c) for c in res.extra["charts"]] == [1, 1]


def test_methods_agree_on_sigma11():
    assert singular_locus("sigma11", method="charts").psi == singular_locus("sigma11", method="minors").psi


@settings(max_examples=20)
@given(st.tuples(rationals, rationals))
def test_sigma12_pointwise_routes_agree(b):
    from repderham.varieties import fiber_ideal, presentation

    pres = presentation("sigma12")
    ideal = fiber_ideal(pres, list(b), reduced=True)
    charts = rank_drop_charts(ideal, pres.fiber_variables)
    by_charts = all(buchberger(c, MonomialOrder.grevlex(c.ring)).is_unit() for c in charts)
    assert by_charts == is_smooth_fiber("sigma12", list(b))


def test_method_validation():
    with pytest.raises(ValueError):
        singular_locus("sigma11", method="fast")

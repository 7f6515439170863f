import pytest
from hypothesis import given

from repderham.forms import DifferentialForm, FormDegreeError, d, exterior_d, form_print, p_iso, p_iso_inv, wedge
from repderham.gaussmanin import handwritten_eta, eta_factorization
from repderham.varieties import T_TEXT
from strategies import RING3, forms, polynomials

R = RING3
x1, x2, x3 = R.gens()
dx = lambda *k: DifferentialForm.dx(R, *k)


def sign(a, b):
    return -1 if (a.degree * b.degree) % 2 else 1


def test_antisymmetry_examples():
    assert dx(0) ^ dx(1) == dx(0, 1)
    assert dx(1) ^ dx(0) == -dx(0, 1)
    assert not (dx(0) ^ dx(0))


def test_dt():
    t = R.parse(T_TEXT)
    want = dx(0) * R.parse("2*x1 - x2*x3") + dx(1) * R.parse("2*x2 - x3*x1") + dx(2) * R.parse("2*x3 - x1*x2")
    assert d(t) == want


def test_d_of_two_form_differentiates_missing_variable():
    w = R.parse(T_TEXT) * x2 * x3
    assert exterior_d(dx(1, 2) * w) == p_iso(w.derivative("x1"))


def test_top_identification():
    assert p_iso(R.one()) == dx(0, 1, 2)
    assert p_iso(x1) == dx(0, 1, 2) * x1
    with pytest.raises(FormDegreeError):
        p_iso_inv(dx(0, 1))


def test_form_print():
    w = dx(1, 2) * x1 - dx(0, 2) * 2
    assert form_print(w) == "x1 dx{23} - 2 dx{13}"
    assert form_print(dx(1, 2) * (x1 ** 3 - 12 * x1)) == "(x1^3 - 12*x1) dx{23}"
    assert form_print(DifferentialForm.zero(R, 2)) == "0"


def test_index_validation():
    with pytest.raises(FormDegreeError):
        DifferentialForm(R, 2, {(0,): x1})
    with pytest.raises(FormDegreeError):
        DifferentialForm(R, 1, {(5,): x1})
    assert DifferentialForm(R, 2, {(2, 1): x1}) == -dx(1, 2) * x1
    assert not DifferentialForm(R, 2, {(1, 1): x1})


def test_eta_wedge_eta_vanishes():
    for eta in (handwritten_eta(), eta_factorization()):
        w = eta.cleared()
        assert not wedge(w, w)


@given(forms())
def test_d_squared_is_zero(a):
    assert not exterior_d(exterior_d(a))


@given(polynomials(), forms())
def test_leibniz_function_times_form(p, w):
    assert exterior_d(w * p) == (d(p) ^ w) + exterior_d(w) * p


@given(forms(), forms())
def test_graded_leibniz(a, b):
    s = -1 if a.degree % 2 else 1
    assert exterior_d(a ^ b) == (exterior_d(a) ^ b) + (a ^ exterior_d(b)) * s


@given(forms(), forms())
def test_graded_commutative(a, b):
    assert (a ^ b) == (b ^ a) * sign(a, b)


@given(forms(degree=1), forms(degree=1), forms(degree=1))
def test_wedge_associative(a, b, c):
    assert ((a ^ b) ^ c) == (a ^ (b ^ c))


@given(polynomials(max_terms=3, deg=2), forms(degree=1, max_terms=2, deg=2))
def test_d_of_ideal_element_times_closed_form(g, w):
    # u in the ideal generated by t - 1: d(u dw) = du ^ dw
    u = (R.parse(T_TEXT) - R.constant(1)) * g
    dw = exterior_d(w)
    assert exterior_d(dw * u) == d(u) ^ dw


@given(polynomials())
def test_p_iso_roundtrip(p):
    assert p_iso_inv(p_iso(p)) == p

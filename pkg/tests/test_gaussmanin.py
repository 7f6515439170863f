from fractions import Fraction

import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from repderham.algebra import QQ, RationalFunction, UPoly, parse_rational_function
from repderham.gaussmanin import (
    HigherOrderPoleError,
    UnsplitDenominatorError,
    connection_matrix,
    eta_factorization,
    handwritten_eta,
    partial_fractions,
    rank2_subsystem,
    rational_roots,
    reference_connection_matrix,
    residue,
)
from strategies import as_fraction, rationals, upolys


@pytest.fixture(scope="module")
def E():
    return connection_matrix()


def frac_matrix(M):
    return [[Fraction(as_fraction(x)) for x in row] for row in M]


@pytest.mark.parametrize("eta", [handwritten_eta, eta_factorization])
def test_eta_wedge_dt_is_volume(eta):
    assert eta().wedge_dt_identity()


def test_cleared_eta_has_polynomial_coefficients():
    eta = handwritten_eta()
    assert eta.denominator == UPoly([-8, 0, 2])
    num = eta.cleared()
    assert num.ring.field is QQ
    assert num.ring.variables == ("x1", "x2", "x3", "t")
    assert set(num.components) == {(0, 1), (0, 2), (1, 2)}


def test_connection_matrix_matches_reference(E):
    assert E == reference_connection_matrix()


def test_both_eta_routes_agree(E):
    assert connection_matrix(handwritten_eta()) == E


def test_text_rows(E):
    rows = E.text_rows()
    assert rows[0][0] == "-1/(2*(t - 2)) + 3/(2*(t + 2))"
    assert rows[1][1] == "3/(2*(t - 2))"
    assert rows[4][0] == "-6/(t - 2)"
    assert rows[0][1] == "0"


def test_blocks_and_subsystem(E):
    assert E.blocks() == [[0, 4], [1], [2], [3]]
    assert E.poles() == [-2, 2]
    sub = rank2_subsystem(E)
    assert sub.shape == (2, 2)
    assert sub[0, 1] == E[0, 4]


def test_residues(E):
    A = rank2_subsystem(E)
    assert frac_matrix(residue(A, 2)) == [[Fraction(-1, 2), Fraction(1, 6)], [-6, 2]]
    assert frac_matrix(residue(A, -2)) == [[Fraction(3, 2), Fraction(-1, 6)], [0, 0]]
    assert frac_matrix(residue(A, "inf")) == [[-1, 0], [6, -2]]


def test_residue_theorem(E):
    total = [[residue(E, 2)[i][j] + residue(E, -2)[i][j] + residue(E, "inf")[i][j] for j in range(5)] for i in range(5)]
    assert all(v == 0 for row in total for v in row)
    # the fixed lines have residue 3/2 at 2 only
    for k in (1, 2, 3):
        assert residue(E, 2)[k][k] == mpq(3, 2) and residue(E, -2)[k][k] == 0


def test_partial_fraction_examples():
    r = parse_rational_function("(t + 10)/(t^2 - 4)", "t")
    pf = partial_fractions(r)
    assert str(pf) == "3/(t - 2) - 2/(t + 2)"
    assert pf.coefficient(2) == 3 and pf.coefficient(-2) == -2
    r = parse_rational_function("(t^3 + t^2 + 1)/t^2", "t")
    assert str(partial_fractions(r)) == "t + 1 + 1/(t)^2"
    assert str(partial_fractions(parse_rational_function("0", "t"))) == "0"


def test_partial_fraction_double_pole():
    r = parse_rational_function("1/((t - 1)^2*(t + 1))", "t")
    pf = partial_fractions(r)
    assert pf.coefficient(1, 2) == mpq(1, 2)
    assert pf.coefficient(1, 1) == mpq(-1, 4)
    assert pf.coefficient(-1, 1) == mpq(1, 4)
    assert pf.reassemble() == r


def test_unsplit_denominator():
    with pytest.raises(UnsplitDenominatorError):
        partial_fractions(parse_rational_function("1/(t^2 + 1)", "t"))


def test_higher_order_pole_at_infinity():
    from repderham.gaussmanin import RationalFunctionMatrix

    M = RationalFunctionMatrix([[parse_rational_function("t", "t")]])
    with pytest.raises(HigherOrderPoleError):
        residue(M, "inf")


@given(upolys(), st.lists(rationals, min_size=1, max_size=3), st.lists(st.integers(1, 3), min_size=3, max_size=3))
def test_partial_fractions_reassemble(num, roots, mults):
    roots = sorted(set(roots))
    den = UPoly.from_roots([r for r, m in zip(roots, mults) for _ in range(m)])
    r = RationalFunction(num, den, "t")
    pf = partial_fractions(r)
    assert pf.reassemble() == r
    for term in pf.terms:
        assert term.at in roots


@given(st.lists(rationals, min_size=1, max_size=4))
def test_rational_roots_recovered(roots):
    p = UPoly.from_roots(roots)
    assert rational_roots(p) == sorted(set(roots))

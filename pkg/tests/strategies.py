"""Hypothesis strategies shared by the test modules."""
from fractions import Fraction

from gmpy2 import mpq
from hypothesis import strategies as st

from repderham.algebra import PolynomialRing, UPoly
from repderham.forms import DifferentialForm

RING3 = PolynomialRing(("x1", "x2", "x3"))

small_ints = st.integers(min_value=-6, max_value=6)
rationals = st.fractions(min_value=-10, max_value=10, max_denominator=6).map(
    lambda f: mpq(f.numerator, f.denominator)
)
nonzero_rationals = rationals.filter(bool)


def exponents(n=3, deg=3):
    return st.tuples(*[st.integers(min_value=0, max_value=deg)] * n)


@st.composite
def polynomials(draw, ring=RING3, max_terms=4, deg=3, coeffs=small_ints):
    terms = draw(st.lists(st.tuples(exponents(ring.nvars, deg), coeffs), max_size=max_terms))
    out = ring.zero()
    for e, c in terms:
        out = out + ring.monomial(e, c)
    return out


@st.composite
def forms(draw, ring=RING3, degree=None, **kw):
    from itertools import combinations

    k = draw(st.integers(0, ring.nvars)) if degree is None else degree
    comps = {}
    for K in combinations(range(ring.nvars), k):
        if draw(st.booleans()):
            comps[K] = draw(polynomials(ring, **kw))
    return DifferentialForm(ring, k, comps)


@st.composite
def upolys(draw, max_degree=4):
    cs = draw(st.lists(rationals, max_size=max_degree + 1))
    return UPoly(cs)


def as_fraction(q):
    return Fraction(int(q.numerator), int(q.denominator))

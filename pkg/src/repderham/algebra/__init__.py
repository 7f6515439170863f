"""Exact polynomial algebra: fields, polynomials, term orders, Gröbner bases."""
from .groebner import (
    BudgetExceeded,
    BuchbergerState,
    GroebnerBasis,
    Ideal,
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
from .orders import MonomialOrder, OrderError
from .polynomial import (
    ParseError,
    Polynomial,
    PolynomialError,
    PolynomialRing,
    RingMismatchError,
    UnknownVariableError,
    parse_rational_function,
    poly_parse,
    poly_print,
)
from .scalars import QQ, RationalFunction, RationalFunctionField, UPoly, format_rational, to_mpq


def poly_eval(p: Polynomial, point):
    return p.evaluate(point)


def partial_derivative(p: Polynomial, var: str) -> Polynomial:
    return p.derivative(var)


def compare(order: MonomialOrder, a, b) -> int:
    return order.compare(a, b)


__all__ = [
    "BudgetExceeded",
    "BuchbergerState",
    "GroebnerBasis",
    "Ideal",
    "MonomialOrder",
    "OrderError",
    "ParseError",
    "Polynomial",
    "PolynomialError",
    "PolynomialRing",
    "QQ",
    "RationalFunction",
    "RationalFunctionField",
    "RingMismatchError",
    "UPoly",
    "UnknownVariableError",
    "buchberger",
    "compare",
    "divide",
    "eliminate",
    "format_rational",
    "is_groebner_basis",
    "is_reduced",
    "lift",
    "naive_buchberger",
    "parse_rational_function",
    "partial_derivative",
    "poly_eval",
    "poly_parse",
    "poly_print",
    "reduce_mod",
    "s_polynomial",
    "to_mpq",
]

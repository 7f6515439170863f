import itertools

import numpy as np
import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from repderham.algebra import PolynomialRing
from repderham.derham import negate_coordinates, x_ring
from repderham.varieties import (
    FREE3_RING,
    SIGMA04_RENAMING,
    T_TEXT,
    U2_TEXT,
    U4_TEXT,
    U_FREE3_TEXT,
    US_TEXT,
    ArityError,
    UnknownSurfaceError,
    delta,
    delta_expanded,
    fiber_ideal,
    fiber_polynomial,
    param_names,
    parse_params,
    presentation,
    psi_eval,
    singular_polynomial,
)
from strategies import rationals

# ---------------------------------------------------------------------------
# independent oracle: trace identities on random SL(2, C) matrices
# ---------------------------------------------------------------------------

RNG = np.random.default_rng(7)


def random_sl2():
    m = RNG.normal(size=(2, 2)) + 1j * RNG.normal(size=(2, 2))
    return m / np.sqrt(np.linalg.det(m))


def fev(p, values):
    idx = p.ring.variables
    total = 0j
    for e, c in p.terms.items():
        term = complex(float(c))
        for v, k in zip(idx, e):
            term *= values[v] ** k
        total += term
    return total


tr = np.trace


@pytest.mark.parametrize("trial", range(5))
def test_commutator_trace_oracle(trial):
    A, B = random_sl2(), random_sl2()
    ring = PolynomialRing(("x1", "x2", "x3"))
    vals = {"x1": tr(A), "x2": tr(B), "x3": tr(A @ B)}
    comm = A @ B @ np.linalg.inv(A) @ np.linalg.inv(B)
    assert abs(fev(ring.parse(T_TEXT), vals) - tr(comm)) < 1e-9


def free3_values():
    A, B, C = random_sl2(), random_sl2(), random_sl2()
    return A, B, C, {
        "z1": tr(A), "z2": tr(B), "z3": tr(C), "z12": tr(A @ B), "z13": tr(A @ C),
        "z23": tr(B @ C), "z123": tr(A @ B @ C),
    }


@pytest.mark.parametrize("trial", range(5))
def test_free3_relation_oracle(trial):
    *_, vals = free3_values()
    assert abs(fev(FREE3_RING.parse(U_FREE3_TEXT), vals)) < 1e-8


@pytest.mark.parametrize("trial", range(5))
def test_sigma04_relation_oracle(trial):
    *_, z = free3_values()
    ring = presentation("sigma04").ambient_ring
    vals = {k: z[v] for k, v in SIGMA04_RENAMING.items()}
    assert abs(fev(ring.parse(U4_TEXT), vals)) < 1e-8


@pytest.mark.parametrize("trial", range(5))
def test_sigma12_relations_oracle(trial):
    A, B, C, z = free3_values()
    vals = {"x1": z["z1"], "x2": z["z2"], "x3": z["z3"], "x12": z["z12"], "x13": z["z13"],
            "x23": z["z23"], "t1": z["z123"], "t2": tr(A @ C @ B)}
    ring = presentation("sigma12").ambient_ring
    assert abs(fev(ring.parse(U2_TEXT), vals)) < 1e-8
    assert abs(fev(ring.parse(US_TEXT), vals)) < 1e-8


# ---------------------------------------------------------------------------
# presentations and fibers
# ---------------------------------------------------------------------------

def test_presentations():
    p11 = presentation("sigma11")
    assert p11.boundary_traces[0] == p11.ambient_ring.parse(T_TEXT)
    assert p11.fiber_variables == ("x1", "x2", "x3") and p11.nparams == 1
    p04 = presentation("sigma04")
    assert p04.relations[0].coefficient((1, 1, 1, 0, 0, 0, 0)) == -1
    p12 = presentation("sigma12")
    assert p12.relations[1] == p12.ambient_ring.parse("t1 + t2 - (x3*x12 + x2*x13 + x1*x23 - x1*x2*x3)")
    assert len(p12.fiber_variables) == 6 and p12.codim == 2


def test_sigma04_is_free3_relation_renamed():
    ring = presentation("sigma04").ambient_ring
    renamed = ring.parse(U4_TEXT).substitute(
        {v: FREE3_RING.gen(SIGMA04_RENAMING[v]) for v in ring.variables}, FREE3_RING
    )
    assert renamed == FREE3_RING.parse(U_FREE3_TEXT)


def test_fiber_ideals():
    r = x_ring()
    assert fiber_polynomial("sigma11", [2]).to_ring(r) == r.parse("x1^2 + x2^2 - x1*x2*x3 + x3^2 - 4")
    u = fiber_polynomial("sigma04", [1, 0, 0, 0]).to_ring(r)
    assert u == r.parse("3 - x1^2 - x2^2 - x3^2 - x1*x2*x3")
    assert u == -(negate_coordinates(r.parse(T_TEXT)) - r.one())
    ideal = fiber_ideal("sigma12", [0, 0])
    ring = ideal.ring
    assert len(ideal.generators) == 4
    assert ring.gen("t1") in ideal.generators and ring.gen("t2") in ideal.generators
    assert len(fiber_ideal("sigma12", [0, 0], reduced=True).generators) == 2


@given(st.tuples(rationals, rationals, rationals, rationals))
def test_sigma04_fibers_principal(b):
    assert len(fiber_ideal("sigma04", list(b)).generators) == 1


def test_symbolic_parameters_stay_in_ring():
    ideal = fiber_ideal("sigma11")
    assert "b" in ideal.ring.variables


def test_psi_values():
    assert psi_eval("sigma11", [2]) == 0 and psi_eval("sigma11", [-2]) == 0
    assert psi_eval("sigma12", [0, 1]) == 12
    assert psi_eval("sigma04", [1, 0, 0, 0]) == 192
    assert psi_eval("sigma11", [0]) == -4


def test_singular_polynomials():
    ring = PolynomialRing(("b",))
    assert singular_polynomial("sigma11", ring) == ring.parse("b^2 - 4")
    r2 = PolynomialRing(("b1", "b2"))
    psi2 = singular_polynomial("sigma12", r2)
    assert psi2 == r2.parse("(b1^2 - 4)*(b2^2 - 4)*(b1 - b2)^2")
    swapped = psi2.substitute({"b1": r2.gen("b2"), "b2": r2.gen("b1")}, r2)
    assert swapped == psi2


def test_delta_symmetric_and_both_forms_agree():
    ring = PolynomialRing(param_names("sigma04"))
    D = delta(ring)
    assert D == delta_expanded(ring)
    gens = ring.gens()
    for perm in itertools.permutations(range(4)):
        moved = D.substitute({v: gens[perm[i]] for i, v in enumerate(ring.variables)}, ring)
        assert moved == D
    assert D.evaluate(dict(zip(ring.variables, (1, 0, 0, 0)))) == 1
    assert D.evaluate(dict(zip(ring.variables, (1, 1, 1, 1)))) == 0


def test_params_parsing_and_errors():
    assert parse_params("1,0,-1/2") == [1, 0, mpq(-1, 2)]
    with pytest.raises(ArityError):
        parse_params("1,x")
    with pytest.raises(ArityError):
        fiber_ideal("sigma11", [1, 2])
    with pytest.raises(UnknownSurfaceError):
        presentation("sigma22")

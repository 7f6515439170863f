
import numpy as np
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from repderham.algebra.linalg import EchelonBasis, kernel, rank, solve

columns = st.lists(
    st.dictionaries(st.integers(0, 4), st.integers(-3, 3).map(mpq), max_size=4), min_size=0, max_size=6
)


def dense(cols, n=5):
    return np.array([[float(c.get(i, 0)) for c in cols] for i in range(n)]) if cols else np.zeros((n, 0))


@given(columns)
def test_rank_matches_numpy(cols):
    # small integer matrices: floating rank is reliable
    assert rank(cols) == (np.linalg.matrix_rank(dense(cols)) if cols else 0)


@given(columns)
def test_kernel_vectors_are_relations(cols):
    ker = kernel(cols)
    assert len(ker) == len(cols) - rank(cols)
    for k in ker:
        total = {}
        for i, c in k.items():
            for r, v in cols[i].items():
                total[r] = total.get(r, 0) + c * v
        assert all(v == 0 for v in total.values())


@given(columns, st.lists(st.integers(-2, 2), min_size=6, max_size=6))
def test_solve_recovers_combinations(cols, coeffs):
    target = {}
    for c, col in zip(coeffs, cols):
        for r, v in col.items():
            target[r] = target.get(r, 0) + c * v
    sol = solve(cols, target)
    assert sol is not None
    back = {}
    for i, c in sol.items():
        for r, v in cols[i].items():
            back[r] = back.get(r, 0) + c * v
    assert {k: v for k, v in back.items() if v} == {k: v for k, v in target.items() if v}


def test_solve_inconsistent():
    assert solve([{0: mpq(1)}], {1: mpq(1)}) is None


def test_echelon_pivot_uses_key():
    e = EchelonBasis(key=lambda k: -k)
    rem, _ = e.add({0: mpq(1), 3: mpq(2)})
    assert e.rows[0][0] == 0
    rem, combo = e.add({0: mpq(2), 3: mpq(4)})
    assert rem is None and combo == {1: 1, 0: -2}

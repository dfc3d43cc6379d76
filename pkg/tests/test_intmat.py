import random

import pytest
from hypothesis import given, strategies as st
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import invariant_factors as sympy_invariants

from schurcone.intmat import (DimensionError, SparseIntMatrix, determinant, invariant_chain, kernel_basis,
                              mat_block_diag, mat_hstack, mat_mul, mat_stack, rank, snf, solve)
from schurcone.suite import determinantal_divisors, invariant_factors_from_divisors

small_ints = st.integers(-9, 9)


@st.composite
def matrices(draw, max_dim=6, elements=small_ints):
    r = draw(st.integers(0, max_dim))
    c = draw(st.integers(0, max_dim))
    return [[draw(elements) for _ in range(c)] for _ in range(r)]


def sympy_factors(rows):
    if not rows or not rows[0]:
        return []
    return sorted(abs(int(d)) for d in sympy_invariants(Matrix(rows), domain=ZZ) if d)


def is_diagonal_chain(m: SparseIntMatrix, diag):
    for (i, j), v in m.entries.items():
        if i != j or diag[i] != v:
            return False
    nz = [d for d in diag if d]
    return all(d > 0 for d in nz) and all(b % a == 0 for a, b in zip(nz, nz[1:]))


def test_known_forms():
    assert snf(SparseIntMatrix.from_dense([[2, 4], [6, 8]])).diag == (2, 4)
    assert snf(SparseIntMatrix.from_dense([[2, 0], [0, 3]])).diag == (1, 6)
    assert snf(SparseIntMatrix.from_dense([[0, 0, 0]])).diag == (0,)
    assert snf(SparseIntMatrix.zeros(3, 0)).diag == ()


@given(matrices())
def test_snf_matches_sympy(rows):
    a = SparseIntMatrix.from_dense(rows, cols=len(rows[0]) if rows else 0)
    assert list(snf(a, transforms=False).invariant_factors) == sympy_factors(rows)


@given(matrices())
def test_transforms_diagonalize(rows):
    a = SparseIntMatrix.from_dense(rows, cols=len(rows[0]) if rows else 0)
    res = snf(a)
    d = res.left @ a @ res.right
    assert is_diagonal_chain(d, res.diag)
    assert res.left @ res.left_inv == SparseIntMatrix.identity(a.rows)
    assert res.right @ res.right_inv == SparseIntMatrix.identity(a.cols)


@given(matrices(max_dim=4))
def test_determinantal_divisors_oracle(rows):
    a = SparseIntMatrix.from_dense(rows, cols=len(rows[0]) if rows else 0)
    expect = invariant_factors_from_divisors(determinantal_divisors(rows))
    assert list(snf(a).invariant_factors) == expect


@given(matrices(max_dim=5, elements=st.integers(-3, 3)))
def test_sparse_and_dense_paths_agree(rows):
    # a wide zero block pushes the matrix onto the sparse elimination path
    a = SparseIntMatrix.from_dense(rows, cols=len(rows[0]) if rows else 0)
    big = mat_block_diag(a, SparseIntMatrix.zeros(40, 40))
    assert snf(big, transforms=False).invariant_factors == snf(a, transforms=False).invariant_factors


@given(matrices(max_dim=5))
def test_kernel_basis(rows):
    a = SparseIntMatrix.from_dense(rows, cols=len(rows[0]) if rows else 0)
    k = kernel_basis(a)
    assert k.cols == a.cols - rank(a)
    assert (a @ k).is_zero()
    # saturated: the kernel lattice has trivial cokernel in its span
    if k.cols:
        assert all(d == 1 for d in snf(k, transforms=False).invariant_factors)


@given(matrices(max_dim=5), st.lists(small_ints, min_size=6, max_size=6))
def test_solve_roundtrip(rows, x):
    cols = len(rows[0]) if rows else 0
    a = SparseIntMatrix.from_dense(rows, cols=cols)
    b = a.apply(x[:cols])
    sol = solve(a, b)
    assert sol is not None
    assert a.apply(sol) == b


def test_solve_reports_no_solution():
    a = SparseIntMatrix.from_dense([[2, 0], [0, 2]])
    assert solve(a, [1, 0]) is None


def test_determinant():
    rng = random.Random(5)
    for _ in range(30):
        n = rng.randint(1, 5)
        rows = [[rng.randint(-5, 5) for _ in range(n)] for _ in range(n)]
        assert determinant(SparseIntMatrix.from_dense(rows)) == int(Matrix(rows).det())


def test_block_helpers():
    a = SparseIntMatrix.from_dense([[1, 2]])
    b = SparseIntMatrix.from_dense([[3, 4]])
    assert mat_stack(a, b).to_dense() == [[1, 2], [3, 4]]
    assert mat_hstack(a, b).to_dense() == [[1, 2, 3, 4]]
    assert mat_block_diag(a, b).to_dense() == [[1, 2, 0, 0], [0, 0, 3, 4]]
    with pytest.raises(DimensionError):
        mat_mul(a, b)


def test_invariant_chain():
    assert invariant_chain([2, 3]) == [6]
    assert invariant_chain([4, 2, 6]) == [2, 2, 12]


def test_large_entries_stay_exact():
    rows = [[10**30 + 1, 10**30], [10**30, 10**30 - 1]]
    assert snf(SparseIntMatrix.from_dense(rows)).diag == (1, 1)

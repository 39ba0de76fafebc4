import numpy as np
import pytest

from src.errors import LengthMismatch, NoSolution, RankDeficient
from src.zq_linalg import (
    gram_schmidt,
    integer_determinant,
    is_linearly_independent,
    kernel_basis_certificate,
    kernel_lattice_basis,
    mat_mod_q,
    matmul_mod_q,
    matrix_norm,
    rank_mod_q,
    row_reduce_mod_q,
    solve_particular,
)


def test_matmul_mod_q_large_modulus_matches_exact():
    rng = np.random.default_rng(1)
    q = 2**31 - 1
    A = rng.integers(0, q, size=(3, 40))
    B = rng.integers(0, q, size=(40, 2))
    exact = (A.astype(object) @ B.astype(object)) % q
    assert np.array_equal(matmul_mod_q(A, B, q), exact.astype(np.int64))


def test_matmul_mod_q_handles_negative_entries():
    A = np.array([[1, -2], [3, 4]])
    B = np.array([[-5], [6]])
    assert matmul_mod_q(A, B, 7).tolist() == [[(-5 - 12) % 7], [(-15 + 24) % 7]]


def test_matmul_shape_mismatch():
    with pytest.raises(LengthMismatch):
        matmul_mod_q(np.ones((2, 3)), np.ones((2, 3)), 7)


def test_row_reduce_and_rank():
    A = np.array([[1, 2, 3], [2, 4, 6], [0, 1, 1]])
    R, pivots = row_reduce_mod_q(A, 11)
    assert pivots == [0, 1]
    assert rank_mod_q(A, 11) == 2
    assert np.array_equal(R[2], [0, 0, 0])


def test_linear_independence():
    assert is_linearly_independent([np.array([1, 0]), np.array([0, 1])], 5)
    assert not is_linearly_independent([np.array([1, 2]), np.array([2, 4])], 5)
    assert is_linearly_independent([], 5)
    assert not is_linearly_independent(np.array([[1, 2, 3], [4, 5, 6]]), 7)


def test_solve_particular():
    rng = np.random.default_rng(2)
    q = 257
    A = rng.integers(0, q, size=(4, 12))
    u = rng.integers(0, q, size=4)
    t = solve_particular(A, u, q)
    assert np.array_equal(mat_mod_q(A @ t, q), u)


def test_solve_particular_no_solution():
    A = np.array([[1, 2], [2, 4]])
    with pytest.raises(NoSolution):
        solve_particular(A, np.array([1, 0]), 7)


def test_kernel_lattice_basis_determinant():
    rng = np.random.default_rng(3)
    q = 7
    A = rng.integers(0, q, size=(2, 6))
    K = kernel_lattice_basis(A, q)
    assert not np.any(matmul_mod_q(A, K, q))
    assert abs(integer_determinant(K)) == q ** rank_mod_q(A, q)


def test_kernel_basis_certificate():
    A = np.array([[1, 3]])
    T = np.array([[-3, 1], [1, 2]])
    assert kernel_basis_certificate(A, T, 7)
    # a sublattice of index 2 is rejected
    assert not kernel_basis_certificate(A, T * np.array([2, 1]), 7)
    # columns outside the lattice are rejected
    assert not kernel_basis_certificate(A, np.eye(2, dtype=np.int64), 7)


def test_integer_determinant_small():
    assert integer_determinant(np.array([[2, 1], [1, 3]])) == 5
    assert integer_determinant(np.array([[1, 2], [2, 4]])) == 0


def test_gram_schmidt_float_matches_exact():
    B = np.array([[3, 1, 0], [1, 2, 1], [0, 1, 4]])
    fast = gram_schmidt(B)
    exact = gram_schmidt(B, exact=True)
    assert np.allclose(fast.norms, exact.norms, rtol=1e-12)
    assert np.allclose(fast.vectors, exact.vectors, atol=1e-9)
    assert fast.vectors[:, 0].tolist() == pytest.approx([3, 1, 0])
    assert abs(fast.vectors[:, 0] @ fast.vectors[:, 1]) < 1e-9
    assert fast.max_norm == pytest.approx(max(fast.norms))


def test_gram_schmidt_rank_deficient():
    with pytest.raises(RankDeficient):
        gram_schmidt(np.array([[1, 2], [2, 4]]))
    with pytest.raises(RankDeficient):
        gram_schmidt(np.array([[1, 2], [2, 4]]), exact=True)
    with pytest.raises(RankDeficient):
        gram_schmidt(np.ones((2, 3)))


def test_matrix_norm():
    assert matrix_norm(np.array([[3, 0], [4, 1]])) == 5.0
    assert matrix_norm(np.zeros((4, 0))) == 0.0
    assert matrix_norm(np.array([1, 2, 2])) == 3.0

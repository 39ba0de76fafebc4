"""Exact linear algebra over Z_q (q prime) and over the integers, plus Gram-Schmidt.

Everything on the mod-q path stays in int64 residues; products are reduced in
blocks small enough that partial sums never overflow a signed 64-bit word.
"""
import logging
from typing import List, Sequence, Tuple, Union

import numpy as np
from sympy import GramSchmidt as sympy_gram_schmidt
from sympy import Matrix

from .config import GS_RANK_TOLERANCE
from .errors import LengthMismatch, NoSolution, RankDeficient
from .types import GramSchmidt

logger = logging.getLogger(__name__)

_FLOAT_EXACT_LIMIT = 2**53


def mat_mod_q(A: np.ndarray, q: int) -> np.ndarray:
    return np.mod(np.asarray(A, dtype=np.int64), np.int64(q))


def _block_size(q: int) -> int:
    return max(1, (2**62) // max(1, (q - 1) ** 2))


def matmul_mod_q(A: np.ndarray, B: np.ndarray, q: int) -> np.ndarray:
    """(A @ B) mod q for integer matrices of any sign; result in [0, q)."""
    A = mat_mod_q(A, q)
    B = mat_mod_q(B, q)
    inner = A.shape[-1]
    if B.shape[0] != inner:
        raise LengthMismatch(f"cannot multiply {A.shape} by {B.shape}")
    step = _block_size(q)
    if step >= inner:
        return np.mod(A @ B, q)
    out = np.zeros(A.shape[:-1] + B.shape[1:], dtype=np.int64)
    for lo in range(0, inner, step):
        hi = min(inner, lo + step)
        out = np.mod(out + np.mod(A[..., lo:hi] @ B[lo:hi], q), q)
    return out


def row_reduce_mod_q(M: np.ndarray, q: int) -> Tuple[np.ndarray, List[int]]:
    """Reduced row echelon form of M over Z_q (q prime) and its pivot columns."""
    R = mat_mod_q(M, q).copy()
    rows, cols = R.shape
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(R[r:, c])[0]
        if nz.size == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            R[[r, p]] = R[[p, r]]
        inv = pow(int(R[r, c]), -1, q)
        R[r] = np.mod(R[r] * inv, q)
        factors = R[:, c].copy()
        factors[r] = 0
        R = np.mod(R - np.outer(factors, R[r]), q)
        pivots.append(c)
        r += 1
    return R, pivots


def rank_mod_q(A: np.ndarray, q: int) -> int:
    _, pivots = row_reduce_mod_q(A, q)
    return len(pivots)


def is_linearly_independent(vectors: Union[Sequence[np.ndarray], np.ndarray], q: int) -> bool:
    """True iff the given Z_q^h vectors (a list, or the columns of a matrix) are independent."""
    if isinstance(vectors, np.ndarray) and vectors.ndim == 2:
        M = vectors
    else:
        if len(vectors) == 0:
            return True
        M = np.column_stack([np.asarray(v, dtype=np.int64) for v in vectors])
    return rank_mod_q(M, q) == M.shape[1]


def solve_particular(A: np.ndarray, u: np.ndarray, q: int) -> np.ndarray:
    """Some t in [0, q)^cols with A t = u (mod q)."""
    A = np.asarray(A, dtype=np.int64)
    u = np.asarray(u, dtype=np.int64).reshape(-1)
    rows, cols = A.shape
    if u.shape[0] != rows:
        raise LengthMismatch(f"u has length {u.shape[0]}, A has {rows} rows")
    R, pivots = row_reduce_mod_q(np.column_stack([A, u]), q)
    if cols in pivots:
        raise NoSolution("u is outside the column space of A mod q")
    t = np.zeros(cols, dtype=np.int64)
    for i, c in enumerate(pivots):
        t[c] = R[i, cols]
    return t


def kernel_lattice_basis(A: np.ndarray, q: int) -> np.ndarray:
    """Canonical basis (columns) of {x in Z^n : A x = 0 mod q}.

    Free columns j give e_j - (E_j placed on the pivots) mod q, pivot columns give
    q e_p; the determinant is q^rank.
    """
    A = np.asarray(A, dtype=np.int64)
    n = A.shape[1]
    E, pivots = row_reduce_mod_q(A, q)
    basis = np.zeros((n, n), dtype=np.int64)
    pivot_set = set(pivots)
    for j in range(n):
        if j in pivot_set:
            basis[j, j] = q
            continue
        basis[j, j] = 1
        for i, p in enumerate(pivots):
            basis[p, j] = (-int(E[i, j])) % q
    return basis


def _exact_product_equals(T: np.ndarray, X: np.ndarray, target: np.ndarray) -> bool:
    bound = float(np.abs(T).max(initial=0)) * float(np.abs(X).max(initial=0)) * T.shape[1]
    if bound < _FLOAT_EXACT_LIMIT:
        prod = T.astype(np.float64) @ X.astype(np.float64)
        return bool(np.array_equal(prod, target.astype(np.float64)))
    prod = T.astype(object) @ X.astype(object)
    return bool(np.array_equal(prod, target.astype(object)))


def kernel_basis_certificate(A: np.ndarray, T: np.ndarray, q: int) -> bool:
    """Exact check that the columns of T are a basis of the kernel lattice of A mod q.

    T's columns must lie in the lattice, and the canonical basis must be an integer
    combination of them; then both generate the same lattice and
    |det T| = q^rank(A). The float solve only proposes the coefficients.
    """
    A = np.asarray(A, dtype=np.int64)
    T = np.asarray(T, dtype=np.int64)
    n = A.shape[1]
    if T.shape != (n, n):
        return False
    if np.any(matmul_mod_q(A, T, q)):
        return False
    K = kernel_lattice_basis(A, q)
    try:
        X = np.linalg.solve(T.astype(np.float64), K.astype(np.float64))
    except np.linalg.LinAlgError:
        return False
    if not np.all(np.isfinite(X)):
        return False
    X = np.rint(X).astype(np.int64)
    return _exact_product_equals(T, X, K)


def integer_determinant(B: np.ndarray) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination; for small dimensions."""
    return int(Matrix(np.asarray(B, dtype=np.int64).tolist()).det(method="bareiss"))


def gram_schmidt(B: np.ndarray, exact: bool = False) -> GramSchmidt:
    """Gram-Schmidt orthogonalization of the columns of B, in column order."""
    B = np.asarray(B)
    rows, cols = B.shape
    if cols > rows:
        raise RankDeficient(f"{cols} columns in dimension {rows} cannot be independent")
    if exact:
        return _gram_schmidt_exact(B)
    Q, R = np.linalg.qr(B.astype(np.float64))
    diag = np.diag(R)
    norms = np.abs(diag)
    bad = np.nonzero(norms < GS_RANK_TOLERANCE)[0]
    if bad.size:
        raise RankDeficient(f"column {int(bad[0])} is dependent on the previous ones")
    vectors = Q * diag
    return GramSchmidt(vectors=vectors, norms=norms, max_norm=float(norms.max(initial=0.0)))


def _gram_schmidt_exact(B: np.ndarray) -> GramSchmidt:
    cols = [Matrix([int(x) for x in B[:, i]]) for i in range(B.shape[1])]
    try:
        ortho = sympy_gram_schmidt(cols)
    except ValueError as exc:
        raise RankDeficient(str(exc)) from None
    vectors = np.array([[float(x) for x in v] for v in ortho]).T.reshape(B.shape)
    norms = np.array([float(v.norm()) for v in ortho])
    return GramSchmidt(vectors=vectors, norms=norms, max_norm=float(norms.max(initial=0.0)))


def matrix_norm(B: np.ndarray) -> float:
    """max over columns of the Euclidean norm; 0 for a matrix with no columns."""
    B = np.asarray(B)
    if B.ndim == 1:
        B = B.reshape(-1, 1)
    if B.shape[1] == 0:
        return 0.0
    squares = np.sum(B.astype(np.float64) ** 2, axis=0)
    return float(np.sqrt(squares.max()))

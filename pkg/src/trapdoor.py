"""Trapdoor generation, orthogonal basis delegation and tag matrices.

trap_gen builds A = [A_bar | G - A_bar R] with a gadget G = I_h (x) (1, 2, ..., 2^(l-1))
and a ternary R, then writes down the explicit short basis

    T_A = [[R S, I + R W], [S, W]]

where S is the gadget lattice basis and G W = -A_bar (mod q). The S-block columns
come first, which keeps the Gram-Schmidt norms of the second block at most 1.
"""
import logging
import math
from typing import Optional, Tuple

import numpy as np

from .config import TRAPGEN_RETRY_CAP
from .errors import GenerationFailed, InvalidBasis, LengthMismatch, NotOrthogonal
from .types import GramSchmidt, Params, Tag, TrapdoorQuality
from .zq_linalg import gram_schmidt, kernel_basis_certificate, mat_mod_q, matmul_mod_q, rank_mod_q

logger = logging.getLogger(__name__)


def gadget_length(q: int) -> int:
    return int(q - 1).bit_length()


def gadget_vector(q: int) -> np.ndarray:
    return 1 << np.arange(gadget_length(q), dtype=np.int64)


def gadget_matrix(h: int, q: int) -> np.ndarray:
    """G = I_h (x) g^T, shape (h, h*l)."""
    return np.kron(np.eye(h, dtype=np.int64), gadget_vector(q).reshape(1, -1))


def gadget_basis(q: int) -> np.ndarray:
    """Basis S_l of {x : <g, x> = 0 mod q}: columns 2e_i - e_(i+1), last column = bits of q."""
    ell = gadget_length(q)
    S = np.zeros((ell, ell), dtype=np.int64)
    for i in range(ell - 1):
        S[i, i] = 2
        S[i + 1, i] = -1
    S[:, ell - 1] = [(q >> i) & 1 for i in range(ell)]
    return S


def bit_decompose(values: np.ndarray, q: int) -> np.ndarray:
    """g^{-1}: residues (h x m) -> stacked little-endian bits (h*l x m)."""
    ell = gadget_length(q)
    v = mat_mod_q(values, q)
    h, m = v.shape
    bits = (v[:, None, :] >> np.arange(ell, dtype=np.int64)[None, :, None]) & 1
    return bits.reshape(h * ell, m)


def _ternary(rng: np.random.Generator, shape: Tuple[int, int]) -> np.ndarray:
    # -1, 0, 1 with probabilities 1/4, 1/2, 1/4
    return (rng.integers(0, 2, size=shape) - rng.integers(0, 2, size=shape)).astype(np.int64)


def trap_gen(params: Params, rng: np.random.Generator) -> Tuple[np.ndarray, np.ndarray]:
    """(A in Z_q^{h x n}, T_A in Z^{n x n}) with A close to uniform and T_A a short basis."""
    n, q, h = params.n, params.q, params.h
    ell = gadget_length(q)
    w = h * ell
    m_bar = n - w
    if m_bar < 1:
        raise GenerationFailed(f"n={n} leaves no room for a gadget of width {w}")

    G = gadget_matrix(h, q)
    S = np.kron(np.eye(h, dtype=np.int64), gadget_basis(q))

    for attempt in range(1, TRAPGEN_RETRY_CAP + 1):
        A_bar = rng.integers(0, q, size=(h, m_bar), dtype=np.int64)
        R = _ternary(rng, (m_bar, w))
        A = np.concatenate([A_bar, mat_mod_q(G - matmul_mod_q(A_bar, R, q), q)], axis=1)
        if rank_mod_q(A, q) != h:
            logger.debug("trap_gen attempt %d: rank deficient, retrying", attempt)
            continue

        W = bit_decompose(-A_bar, q)
        # entries are tiny, so the float products are exact
        RS = np.rint(R.astype(np.float64) @ S.astype(np.float64)).astype(np.int64)
        RW = np.rint(R.astype(np.float64) @ W.astype(np.float64)).astype(np.int64)
        top = np.concatenate([RS, np.eye(m_bar, dtype=np.int64) + RW], axis=1)
        bottom = np.concatenate([S, W], axis=1)
        T = np.concatenate([top, bottom], axis=0)
        if np.any(matmul_mod_q(A, T, q)):
            logger.debug("trap_gen attempt %d: basis not in the kernel lattice", attempt)
            continue
        return A, T

    raise GenerationFailed(f"no valid trapdoor after {TRAPGEN_RETRY_CAP} attempts")


def trapdoor_quality(T: np.ndarray, params: Params, gs: Optional[GramSchmidt] = None) -> TrapdoorQuality:
    """||T~||, ||T|| and the achieved constant C = ||T~|| / sqrt(h log2 q)."""
    if gs is None:
        gs = gram_schmidt(T)
    norm = float(np.sqrt(np.max(np.sum(np.asarray(T, dtype=np.float64) ** 2, axis=0))))
    c = gs.max_norm / math.sqrt(params.h * math.log2(params.q))
    return TrapdoorQuality(gs_norm=gs.max_norm, norm=norm, constant_c=c)


def check_trapdoor(A: np.ndarray, T: np.ndarray, params: Params) -> TrapdoorQuality:
    """Full trap_gen contract: A T = 0 mod q, rank A = h, columns of T a basis (|det| = q^h)."""
    if np.any(matmul_mod_q(A, T, params.q)):
        raise InvalidBasis("A T is not 0 mod q")
    if rank_mod_q(A, params.q) != params.h:
        raise InvalidBasis("A does not have rank h")
    if not kernel_basis_certificate(A, T, params.q):
        raise InvalidBasis("columns of T do not generate the kernel lattice")
    return trapdoor_quality(T, params)


def tag_matrix(tag: Tag, n: Optional[int] = None) -> np.ndarray:
    """H_tau = diag(2 tau_1 - 1, ..., 2 tau_n - 1)."""
    if n is not None and tag.n != n:
        raise LengthMismatch(f"tag has length {tag.n}, expected {n}")
    return np.diag(2 * tag.bits.astype(np.int64) - 1)


def tag_signs(tag: Tag) -> np.ndarray:
    """The diagonal of H_tau."""
    return 2 * tag.bits.astype(np.int64) - 1


def is_orthogonal(H: np.ndarray) -> bool:
    H = np.asarray(H, dtype=np.int64)
    return H.ndim == 2 and H.shape[0] == H.shape[1] and bool(
        np.array_equal(H @ H.T, np.eye(H.shape[0], dtype=np.int64))
    )


def delegated_matrix(A: np.ndarray, H: np.ndarray, q: int) -> np.ndarray:
    """B = A H^T mod q."""
    return matmul_mod_q(A, np.asarray(H, dtype=np.int64).T, q)


def new_basis(A: np.ndarray, H: np.ndarray, T_A: np.ndarray, q: int, check: bool = True) -> np.ndarray:
    """Basis T_B = H T_A of the kernel lattice of B = A H^T, for orthogonal integer H."""
    H = np.asarray(H, dtype=np.int64)
    if not is_orthogonal(H):
        raise NotOrthogonal("H H^T != I")
    T_B = H @ np.asarray(T_A, dtype=np.int64)
    if check and np.any(matmul_mod_q(delegated_matrix(A, H, q), T_B, q)):
        raise InvalidBasis("T_A is not a basis of the kernel lattice of A")
    return T_B


def rotate_gram_schmidt(gs: GramSchmidt, H: np.ndarray) -> GramSchmidt:
    """Gram-Schmidt data of H T from that of T (H orthogonal keeps all inner products)."""
    vectors = np.asarray(H, dtype=np.float64) @ gs.vectors
    return GramSchmidt(vectors=vectors, norms=gs.norms.copy(), max_norm=gs.max_norm)


def delegate(
    A: np.ndarray, T_A: np.ndarray, gs: GramSchmidt, tag: Tag, q: int
) -> Tuple[np.ndarray, np.ndarray, GramSchmidt]:
    """(B^tau, T_{B^tau}, its Gram-Schmidt data) for a sign-diagonal tag matrix."""
    signs = tag_signs(tag)
    B = mat_mod_q(np.asarray(A, dtype=np.int64) * signs[None, :], q)
    T_B = np.asarray(T_A, dtype=np.int64) * signs[:, None]
    gs_B = GramSchmidt(vectors=gs.vectors * signs[:, None], norms=gs.norms.copy(), max_norm=gs.max_norm)
    return B, T_B, gs_B

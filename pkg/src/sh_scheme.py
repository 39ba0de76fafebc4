"""Semigroup-homomorphic signatures over messages under concatenation: gen, sign, verify."""
import logging
import math
from typing import Tuple

import numpy as np

from .config import ALPHA_RETRY_CAP, DEFAULT_HASH_ID, HASH_IDS, NORM_RELATIVE_TOLERANCE
from .errors import GenerationFailed, InvariantViolation, PolicyViolation, SchemeError, UnknownHashId
from .gauss_sampler import sample_pre
from .message_encode import concat, message_syndromes
from .trapdoor import trap_gen, trapdoor_quality
from .types import GramSchmidt, HashId, Message, Params, PublicKey, SecretKey, Signature
from .zq_linalg import gram_schmidt, is_linearly_independent, kernel_basis_certificate, matmul_mod_q, matrix_norm

logger = logging.getLogger(__name__)


def norm_bound(params: Params) -> float:
    """Verification bound V * sqrt(k n) on the max column norm."""
    return params.V * math.sqrt(params.k * params.n)


def sample_alphas(params: Params, rng: np.random.Generator) -> Tuple[np.ndarray, int]:
    """k uniform, linearly independent syndrome vectors (h x k) and the number of rounds used."""
    for rounds in range(1, ALPHA_RETRY_CAP + 1):
        alphas = rng.integers(0, params.q, size=(params.h, params.k), dtype=np.int64)
        if is_linearly_independent(alphas, params.q):
            if rounds > 1:
                logger.warning("alpha sampling needed %d rounds", rounds)
            return alphas, rounds
    raise GenerationFailed(f"no independent alphas after {ALPHA_RETRY_CAP} rounds")


def key_gram_schmidt(sk: SecretKey) -> GramSchmidt:
    """Gram-Schmidt data of the secret basis, computed once per key."""
    if sk.gs is None:
        object.__setattr__(sk, "gs", gram_schmidt(sk.T))
    assert sk.gs is not None
    return sk.gs


def gen(
    params: Params, rng: np.random.Generator, hash_id: HashId = DEFAULT_HASH_ID
) -> Tuple[PublicKey, SecretKey]:
    if hash_id not in HASH_IDS:
        raise UnknownHashId(f"unknown hash id {hash_id!r}")
    A, T = trap_gen(params, rng)
    alphas, _ = sample_alphas(params, rng)
    pk = PublicKey(params=params, A=A, alphas=alphas, hash_id=hash_id)
    sk = SecretKey(T=T)
    quality = trapdoor_quality(T, params, key_gram_schmidt(sk))
    logger.info(
        "generated key n=%d h=%d q=%d k=%d: ||T~||=%.3f C=%.3f",
        params.n, params.h, params.q, params.k, quality.gs_norm, quality.constant_c,
    )
    return pk, sk


def sign_with(
    A: np.ndarray,
    T: np.ndarray,
    gs: GramSchmidt,
    pk: PublicKey,
    x: Message,
    rng: np.random.Generator,
    single_symbol_only: bool = False,
) -> Signature:
    """Preimage-sample every symbol's syndrome under (A, T). Shared by both schemes."""
    params = pk.params
    if single_symbol_only and len(x) > 1:
        raise PolicyViolation(f"private-key signing restricted to single symbols, got {len(x)}")
    if x.is_empty():
        return Signature.empty(params.n)
    B = message_syndromes(x, pk.alphas, params.q, pk.hash_id)
    columns = [
        sample_pre(A, T, B[:, i], params.V, rng, params.q, params.tail_cut, gs)
        for i in range(B.shape[1])
    ]
    return Signature.from_columns(columns, params.n)


def sign(
    sk: SecretKey,
    pk: PublicKey,
    x: Message,
    rng: np.random.Generator,
    single_symbol_only: bool = False,
) -> Signature:
    return sign_with(pk.A, sk.T, key_gram_schmidt(sk), pk, x, rng, single_symbol_only)


def verify_with(A: np.ndarray, pk: PublicKey, x: Message, sigma: Signature) -> int:
    """1 iff sigma has |x| columns of dimension n, passes the norm bound and A sigma_i = beta_i."""
    params = pk.params
    try:
        if len(sigma) != len(x):
            logger.debug("reject: %d columns for %d symbols", len(sigma), len(x))
            return 0
        if x.is_empty():
            return 1
        if sigma.n != params.n:
            logger.debug("reject: column dimension %d, expected %d", sigma.n, params.n)
            return 0
        bound = norm_bound(params)
        norm = matrix_norm(sigma.matrix)
        if norm > bound * (1.0 + NORM_RELATIVE_TOLERANCE):
            logger.debug("reject: norm %.3f above bound %.3f", norm, bound)
            return 0
        B = message_syndromes(x, pk.alphas, params.q, pk.hash_id)
        got = matmul_mod_q(A, sigma.matrix, params.q)
        bad = np.nonzero(np.any(got != B, axis=0))[0]
        if bad.size:
            logger.debug("reject: syndrome mismatch in column %d", int(bad[0]))
            return 0
        return 1
    except (SchemeError, ValueError) as exc:
        logger.debug("reject: malformed input (%s)", exc)
        return 0


def verify(pk: PublicKey, x: Message, sigma: Signature) -> int:
    return verify_with(pk.A, pk, x, sigma)


def hom_concat(sigma_x: Signature, sigma_y: Signature) -> Signature:
    """Signature on x||y from signatures on x and y."""
    return concat(sigma_x, sigma_y)


def check_key_pair(pk: PublicKey, sk: SecretKey, full: bool = False) -> None:
    """Raise InvariantViolation unless (pk, sk) satisfies the key contract.

    full=True adds the exact lattice-basis certificate for T (costly at large n).
    """
    params = pk.params
    if pk.A.shape != (params.h, params.n):
        raise InvariantViolation(f"A has shape {pk.A.shape}, expected {(params.h, params.n)}")
    if pk.alphas.shape != (params.h, params.k):
        raise InvariantViolation(f"alphas have shape {pk.alphas.shape}, expected {(params.h, params.k)}")
    if sk.T.shape != (params.n, params.n):
        raise InvariantViolation(f"T has shape {sk.T.shape}, expected {(params.n, params.n)}")
    if not is_linearly_independent(pk.alphas, params.q):
        raise InvariantViolation("alphas are linearly dependent")
    if np.any(matmul_mod_q(pk.A, sk.T, params.q)):
        raise InvariantViolation("A T is not 0 mod q")
    if full and not kernel_basis_certificate(pk.A, sk.T, params.q):
        raise InvariantViolation("T is not a basis of the kernel lattice of A")

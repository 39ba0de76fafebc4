"""Linearly homomorphic signatures with data-set tags.

A tag tau selects the delegated matrix B = A H_tau^T, H_tau = diag(2 tau - 1); the
signer rotates its basis into T_B = H_tau T_A and samples preimages under B.
"""
import logging
from typing import Sequence, Tuple

import numpy as np

from .config import DEFAULT_COEFFICIENT_BOUND, DEFAULT_HASH_ID
from .errors import LengthMismatch
from .message_encode import apply_functional
from .sh_scheme import gen, key_gram_schmidt, sign_with, verify_with
from .trapdoor import delegate, tag_signs
from .types import HashId, LinearFunctional, Message, Params, PublicKey, SecretKey, Signature, Tag
from .zq_linalg import mat_mod_q

logger = logging.getLogger(__name__)


def setup(
    params: Params, rng: np.random.Generator, hash_id: HashId = DEFAULT_HASH_ID
) -> Tuple[PublicKey, SecretKey]:
    return gen(params, rng, hash_id)


def random_tag(n: int, rng: np.random.Generator) -> Tag:
    """tau uniform over {0,1}^n."""
    return Tag(rng.integers(0, 2, size=n))


def delegated_matrix(pk: PublicKey, tag: Tag) -> np.ndarray:
    """B^tau = A H_tau^T mod q."""
    return mat_mod_q(pk.A * tag_signs(tag)[None, :], pk.params.q)


def lsh_sign(
    sk: SecretKey,
    pk: PublicKey,
    tag: Tag,
    v: Message,
    rng: np.random.Generator,
    single_symbol_only: bool = False,
) -> Signature:
    if tag.n != pk.params.n:
        raise LengthMismatch(f"tag has length {tag.n}, expected {pk.params.n}")
    B, T_B, gs_B = delegate(pk.A, sk.T, key_gram_schmidt(sk), tag, pk.params.q)
    return sign_with(B, T_B, gs_B, pk, v, rng, single_symbol_only)


def combine(
    pk: PublicKey,
    tag: Tag,
    pairs: Sequence[Tuple[int, Signature]],
    p: int = DEFAULT_COEFFICIENT_BOUND,
) -> Signature:
    """c_1 sigma_1 || ... || c_l sigma_l. Unkeyed; pk and tag only fix the dimension."""
    if not pairs:
        return Signature.empty(pk.params.n)
    f = LinearFunctional(tuple(c for c, _ in pairs), p)
    return apply_functional(f, [s for _, s in pairs])


def combine_messages(
    messages: Sequence[Message], coefficients: Sequence[int], p: int = DEFAULT_COEFFICIENT_BOUND
) -> Message:
    """The message a combined signature is intended for."""
    return apply_functional(LinearFunctional(tuple(coefficients), p), list(messages))


def lsh_verify(pk: PublicKey, tag: Tag, y: Message, sigma: Signature) -> int:
    if tag.n != pk.params.n:
        logger.debug("reject: tag length %d, expected %d", tag.n, pk.params.n)
        return 0
    return verify_with(delegated_matrix(pk, tag), pk, y, sigma)

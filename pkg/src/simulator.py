"""The reduction's side of the security proofs.

Given a uniform SIS instance A, the simulator publishes alpha_j = A gamma_j for short
gamma_j, answers signing queries without any trapdoor and turns a forgery into a
short nonzero vector of the kernel lattice of A.
"""
import logging
import math
from typing import Optional, Tuple

import numpy as np

from .config import ALPHA_RETRY_CAP, DEFAULT_HASH_ID, SIM_GAMMA_RETRY_CAP
from .errors import GenerationFailed, InvariantViolation, NotAForgery
from .gauss_sampler import sample_dom
from .lsh_scheme import lsh_verify
from .message_encode import hash_symbol
from .sh_scheme import verify
from .trapdoor import tag_signs
from .types import Forgery, HashId, Message, Params, PublicKey, Signature, SimTrapdoor, SisSolution, Tag
from .zq_linalg import is_linearly_independent, matmul_mod_q

logger = logging.getLogger(__name__)


def _short_gamma(params: Params, rng: np.random.Generator) -> np.ndarray:
    bound = params.s_sim * math.sqrt(params.n)
    for attempt in range(1, SIM_GAMMA_RETRY_CAP + 1):
        gamma = sample_dom(params.n, params.s_sim, rng, params.tail_cut)
        if float(np.linalg.norm(gamma)) <= bound:
            return gamma
        logger.debug("gamma attempt %d above s sqrt(n), resampling", attempt)
    raise GenerationFailed(f"no gamma within s sqrt(n) after {SIM_GAMMA_RETRY_CAP} attempts")


def sample_gammas(
    params: Params, A: np.ndarray, rng: np.random.Generator
) -> Tuple[np.ndarray, np.ndarray, int]:
    """(gammas n x k, alphas = A gammas mod q, rounds until the alphas were independent)."""
    for rounds in range(1, ALPHA_RETRY_CAP + 1):
        gammas = np.column_stack([_short_gamma(params, rng) for _ in range(params.k)])
        alphas = matmul_mod_q(A, gammas, params.q)
        if is_linearly_independent(alphas, params.q):
            if rounds > 1:
                logger.warning("simulated alpha sampling needed %d rounds", rounds)
            return gammas, alphas, rounds
    raise GenerationFailed(f"no independent simulated alphas after {ALPHA_RETRY_CAP} rounds")


def sim_keygen(
    params: Params, A: np.ndarray, rng: np.random.Generator, hash_id: HashId = DEFAULT_HASH_ID
) -> Tuple[PublicKey, SimTrapdoor]:
    A = np.asarray(A, dtype=np.int64)
    if A.shape != (params.h, params.n):
        raise GenerationFailed(f"SIS instance has shape {A.shape}, expected {(params.h, params.n)}")
    gammas, alphas, _ = sample_gammas(params, A, rng)
    pk = PublicKey(params=params, A=A, alphas=alphas, hash_id=hash_id)
    return pk, SimTrapdoor(gammas=gammas, s=params.s_sim, hash_id=hash_id)


def _combination(trap: SimTrapdoor, symbol: bytes) -> np.ndarray:
    bits = hash_symbol(symbol, trap.gammas.shape[1], trap.hash_id).astype(np.int64)
    return trap.gammas @ bits


def sim_sign(trap: SimTrapdoor, x: Message) -> Signature:
    """sigma_i = sum_j h(x_i)_j gamma_j; deterministic given trap."""
    n = trap.gammas.shape[0]
    return Signature.from_columns([_combination(trap, s) for s in x], n)


def lsh_sim_sign(trap: SimTrapdoor, tag: Tag, v: Message) -> Signature:
    """sigma_i = H_tau (sum_j h(v_i)_j gamma_j)."""
    signs = tag_signs(tag)
    n = trap.gammas.shape[0]
    return Signature.from_columns([signs * _combination(trap, s) for s in v], n)


def extract_sis(pk: PublicKey, trap: SimTrapdoor, forgery: Forgery) -> Optional[SisSolution]:
    """A short nonzero z with A z = 0 mod q from a valid forgery, or None.

    For a tagged forgery the columns are first rotated back by H_tau^T.
    """
    params = pk.params
    tag = forgery.tag
    if tag is None:
        valid = verify(pk, forgery.message, forgery.signature)
    else:
        valid = lsh_verify(pk, tag, forgery.message, forgery.signature)
    if not valid:
        raise NotAForgery("forgery does not verify under the simulated key")

    signs = tag_signs(tag) if tag is not None else None
    bound = 2.0 * params.V * math.sqrt(params.k * params.n)
    for i, (symbol, column) in enumerate(zip(forgery.message, forgery.signature.columns)):
        sigma = column if signs is None else signs * column
        z = sigma - _combination(trap, symbol)
        if not np.any(z):
            continue
        norm = float(np.linalg.norm(z))
        if np.any(matmul_mod_q(pk.A, z.reshape(-1, 1), params.q)):
            raise InvariantViolation(f"extracted vector from column {i} is not in the kernel lattice")
        if norm > bound * (1.0 + 1e-9):
            raise InvariantViolation(f"extracted vector from column {i} has norm {norm:.3f} > {bound:.3f}")
        return SisSolution(z=z, norm=norm, column=i)

    logger.warning("extraction found no solution: every forged column equals its simulated preimage")
    return None

"""The challenger's signing oracle: routes queries to the real or the simulated signer."""
import logging
import time
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import PolicyViolation, QueryBudgetExceeded
from .lsh_scheme import lsh_sign, random_tag
from .sh_scheme import sign
from .simulator import lsh_sim_sign, sim_sign
from .state_store import StateStore
from .types import Message, PublicKey, SecretKey, Signature, SimTrapdoor, Tag

logger = logging.getLogger(__name__)


class SigningOracle:
    """Answers single-symbol (SH) or data-set (LSH) queries and records them in the StateStore.

    Exactly one of sk / trap is the active signer, chosen by the store's mode. leaked
    is what leaked_trapdoor() hands the adversary (None unless the game leaks it).
    """

    def __init__(
        self,
        state_store: StateStore,
        pk: PublicKey,
        rng: np.random.Generator,
        sk: Optional[SecretKey] = None,
        trap: Optional[SimTrapdoor] = None,
        leaked: Optional[SecretKey] = None,
        deduplicate_queries: bool = True,
    ) -> None:
        if state_store.mode == "real" and sk is None:
            raise ValueError("real mode needs a secret key")
        if state_store.mode == "simulated" and trap is None:
            raise ValueError("simulated mode needs a simulation trapdoor")
        self.state_store = state_store
        self.pk = pk
        self.rng = rng
        self.sk = sk
        self.trap = trap
        self._leaked = leaked
        self.deduplicate_queries = deduplicate_queries
        self.seconds = 0.0

    @property
    def n(self) -> int:
        return self.pk.params.n

    def leaked_trapdoor(self) -> Optional[SecretKey]:
        return self._leaked

    def _spend(self) -> None:
        if not self.state_store.use_query():
            raise QueryBudgetExceeded(f"query budget of {self.state_store.query_budget} exhausted")

    def _sign_symbol(self, symbol: bytes, tag: Optional[Tag]) -> Signature:
        x = Message.of(symbol)
        if self.state_store.mode == "real":
            assert self.sk is not None
            if tag is None:
                return sign(self.sk, self.pk, x, self.rng, single_symbol_only=True)
            return lsh_sign(self.sk, self.pk, tag, x, self.rng, single_symbol_only=True)
        assert self.trap is not None
        if tag is None:
            return sim_sign(self.trap, x)
        return lsh_sim_sign(self.trap, tag, x)

    def sign(self, symbol: bytes) -> Signature:
        """Signature on the one-symbol message (symbol,)."""
        if self.state_store.scheme != "SH":
            raise PolicyViolation("the tagged scheme answers data-set queries only")
        started = time.perf_counter()
        try:
            self._spend()
            key = (bytes(symbol),)
            self.state_store.log_event("query", symbols=[key[0].hex()])
            cached = self.state_store.cached(key) if self.deduplicate_queries else None
            if cached is not None:
                logger.warning("repeated query for symbol %s answered from cache", key[0].hex())
                sigma = cached.signatures[0]
            else:
                sigma = self._sign_symbol(key[0], None)
                self.state_store.add_record(key, [sigma])
            self.state_store.log_event("answer", signature=_hex_signature(sigma))
            return sigma
        finally:
            self.seconds += time.perf_counter() - started

    def sign_dataset(self, symbols: Sequence[bytes]) -> Tuple[Tag, List[Signature]]:
        """A fresh uniform tag and one signature per symbol under it."""
        if self.state_store.scheme != "LSH":
            raise PolicyViolation("the untagged scheme answers single-symbol queries only")
        started = time.perf_counter()
        try:
            self._spend()
            key = tuple(bytes(s) for s in symbols)
            self.state_store.log_event("query", symbols=[s.hex() for s in key])
            cached = self.state_store.cached(key) if self.deduplicate_queries else None
            if cached is not None and cached.tag is not None:
                logger.warning("repeated data-set query answered from cache")
                tag, sigmas = cached.tag, cached.signatures
            else:
                tag = random_tag(self.n, self.rng)
                sigmas = [self._sign_symbol(s, tag) for s in key]
                self.state_store.add_record(key, sigmas, tag)
            self.state_store.log_event(
                "answer",
                tag=np.packbits(tag.bits, bitorder="little").tobytes().hex(),
                signatures=[_hex_signature(s) for s in sigmas],
            )
            return tag, list(sigmas)
        finally:
            self.seconds += time.perf_counter() - started


def _hex_signature(sigma: Signature) -> str:
    return np.ascontiguousarray(sigma.matrix.T, dtype="<i8").tobytes().hex()

"""Reference adversaries for the unforgeability game.

Each one receives the public key and the signing oracle and returns a claimed forgery.
"""
from abc import ABC, abstractmethod
from typing import Optional

import numpy as np

from .lsh_scheme import combine, lsh_sign, random_tag
from .message_encode import concat
from .sh_scheme import hom_concat, sign
from .signing_oracle import SigningOracle
from .types import Forgery, Message, PublicKey, Signature


class Adversary(ABC):
    """An algorithm attacking either scheme through (pk, oracle)."""

    name = "adversary"

    def __init__(self, rng: Optional[np.random.Generator] = None) -> None:
        self.rng = rng if rng is not None else np.random.default_rng(0)

    def fresh_symbol(self) -> bytes:
        return b"adv-" + self.rng.bytes(12)

    @abstractmethod
    def attack(self, pk: PublicKey, oracle: SigningOracle) -> Forgery:
        ...


class ReplayAdversary(Adversary):
    """Queries one symbol and hands back the answer."""

    name = "replay"

    def attack(self, pk: PublicKey, oracle: SigningOracle) -> Forgery:
        symbol = self.fresh_symbol()
        if oracle.state_store.scheme == "LSH":
            tag, sigmas = oracle.sign_dataset([symbol])
            return Forgery(Message.of(symbol), sigmas[0], tag)
        return Forgery(Message.of(symbol), oracle.sign(symbol))


class ConcatAdversary(Adversary):
    """Queries two symbols and outputs their homomorphic concatenation."""

    name = "concat"

    def attack(self, pk: PublicKey, oracle: SigningOracle) -> Forgery:
        a, b = self.fresh_symbol(), self.fresh_symbol()
        if oracle.state_store.scheme == "LSH":
            tag, (sa, sb) = oracle.sign_dataset([a, b])
            sigma = combine(pk, tag, [(1, sa), (2, sb)])
            return Forgery(Message((a, b, b)), sigma, tag)
        sa, sb = oracle.sign(a), oracle.sign(b)
        return Forgery(concat(Message.of(a), Message.of(b)), hom_concat(sa, sb))


class RandomSignatureAdversary(Adversary):
    """Outputs a fresh symbol with a short random signature; essentially never verifies."""

    name = "random-sigma"

    def attack(self, pk: PublicKey, oracle: SigningOracle) -> Forgery:
        n = pk.params.n
        column = self.rng.integers(-3, 4, size=(n, 1))
        tag = random_tag(n, self.rng) if oracle.state_store.scheme == "LSH" else None
        return Forgery(Message.of(self.fresh_symbol()), Signature(column), tag)


class TrapdoorLeakAdversary(Adversary):
    """Signs a never-queried symbol with a trapdoor the game leaked.

    In the tagged scheme it forges under a fresh tag (type I) unless
    under_queried_tag is set, in which case it asks for a one-symbol data set and
    forges a different symbol under that tag (type II).
    """

    name = "trapdoor-leak"

    def __init__(self, rng: Optional[np.random.Generator] = None, under_queried_tag: bool = False) -> None:
        super().__init__(rng)
        self.under_queried_tag = under_queried_tag

    def attack(self, pk: PublicKey, oracle: SigningOracle) -> Forgery:
        sk = oracle.leaked_trapdoor()
        if sk is None:
            return RandomSignatureAdversary(self.rng).attack(pk, oracle)
        symbol = self.fresh_symbol()
        message = Message.of(symbol)
        if oracle.state_store.scheme == "SH":
            return Forgery(message, sign(sk, pk, message, self.rng))
        if self.under_queried_tag:
            tag, _ = oracle.sign_dataset([self.fresh_symbol()])
        else:
            tag = random_tag(pk.params.n, self.rng)
        return Forgery(message, lsh_sign(sk, pk, tag, message, self.rng), tag)


ADVERSARIES = {
    cls.name: cls
    for cls in (ReplayAdversary, ConcatAdversary, RandomSignatureAdversary, TrapdoorLeakAdversary)
}

"""Semigroup algebra on messages and signatures, symbol hashing and syndromes."""
import hashlib
import logging
import struct
from typing import Iterable, Sequence, TypeVar, Union

import numpy as np

from .config import DEFAULT_COEFFICIENT_BOUND, DEFAULT_HASH_ID, HASH_IDS, SYMBOL_DOMAIN_TAG
from .errors import CoefficientOutOfRange, LengthMismatch, UnknownHashId
from .types import LinearFunctional, Message, Signature

logger = logging.getLogger(__name__)

Element = TypeVar("Element", Message, Signature)

_XOFS = {
    "shake256": hashlib.shake_256,
    "shake128": hashlib.shake_128,
}


def hash_symbol(symbol: bytes, k: int, hash_id: str = DEFAULT_HASH_ID) -> np.ndarray:
    """First k bits of XOF(0x01 || len(symbol) || symbol), as a 0/1 vector."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if hash_id not in HASH_IDS or hash_id not in _XOFS:
        raise UnknownHashId(f"unknown hash id {hash_id!r}")
    xof = _XOFS[hash_id]()
    xof.update(SYMBOL_DOMAIN_TAG)
    xof.update(struct.pack("<Q", len(symbol)))
    xof.update(symbol)
    digest = np.frombuffer(xof.digest((k + 7) // 8), dtype=np.uint8)
    return np.unpackbits(digest, bitorder="little")[:k]


def syndrome(bits: np.ndarray, alphas: np.ndarray, q: int) -> np.ndarray:
    """beta = sum_j bits_j * alpha_j mod q; alphas holds alpha_j as column j."""
    bits = np.asarray(bits, dtype=np.int64).reshape(-1)
    alphas = np.asarray(alphas, dtype=np.int64)
    if bits.shape[0] != alphas.shape[1]:
        raise LengthMismatch(f"{bits.shape[0]} hash bits for {alphas.shape[1]} syndrome vectors")
    return np.mod(alphas @ bits, q)


def message_syndromes(
    message: Message, alphas: np.ndarray, q: int, hash_id: str = DEFAULT_HASH_ID
) -> np.ndarray:
    """B = [beta_1, ..., beta_|x|] as an h x |x| matrix."""
    k = alphas.shape[1]
    if message.is_empty():
        return np.zeros((alphas.shape[0], 0), dtype=np.int64)
    return np.column_stack([syndrome(hash_symbol(x, k, hash_id), alphas, q) for x in message])


def concat(a: Element, b: Element) -> Element:
    """a || b, for two messages or two signatures."""
    if isinstance(a, Message) and isinstance(b, Message):
        return Message(a.symbols + b.symbols)
    if isinstance(a, Signature) and isinstance(b, Signature):
        if a.is_empty():
            return b
        if b.is_empty():
            return a
        if a.n != b.n:
            raise LengthMismatch(f"cannot concatenate signatures of dimension {a.n} and {b.n}")
        return Signature(np.concatenate([a.matrix, b.matrix], axis=1))
    raise TypeError(f"cannot concatenate {type(a).__name__} with {type(b).__name__}")


def concat_all(items: Iterable[Element]) -> Union[Message, Signature]:
    items = list(items)
    if not items:
        return Message()
    out = items[0]
    for item in items[1:]:
        out = concat(out, item)
    return out


def scalar_mul(c: int, a: Element, p: int = DEFAULT_COEFFICIENT_BOUND) -> Element:
    """c-fold self-concatenation; 0 gives the empty element."""
    if not 0 <= c < p:
        raise CoefficientOutOfRange(f"coefficient {c} outside [0, {p})")
    if isinstance(a, Message):
        return Message(a.symbols * c)
    if isinstance(a, Signature):
        if c == 0:
            return Signature.empty(a.n)
        return Signature(np.tile(a.matrix, (1, c)))
    raise TypeError(f"cannot scale {type(a).__name__}")


def apply_functional(f: LinearFunctional, items: Sequence[Element]) -> Element:
    """f(v_1..v_l) = c_1 v_1 || ... || c_l v_l."""
    if len(f) != len(items):
        raise LengthMismatch(f"functional of length {len(f)} applied to {len(items)} items")
    if not items:
        raise LengthMismatch("cannot apply a functional to an empty tuple")
    if isinstance(items[0], Signature):
        out: Union[Message, Signature] = Signature.empty(items[0].n)
    else:
        out = Message()
    for c, item in zip(f.coefficients, items):
        out = concat(out, scalar_mul(c, item, f.p))
    return out


def span_contains(queried: Iterable[bytes], candidate: Message, include_empty: bool = False) -> bool:
    """Is candidate a finite concatenation of queried symbols?

    The empty message is outside the span unless include_empty is set.
    """
    if candidate.is_empty():
        return include_empty
    allowed = set(bytes(s) for s in queried)
    return all(s in allowed for s in candidate)

"""Binary envelopes for params, keys, signatures, messages and tags.

Every envelope except the params record is

    magic (4) | version (u16) | params digest (32) | body

with all integers little-endian. Z_q residues travel as u64, signature entries as
i64. An all-zero digest means "not bound to any params".
"""
import logging
import struct
from typing import Optional, Tuple, Union

import numpy as np

from .config import (
    FORMAT_VERSION,
    HASH_IDS,
    MAGIC_MESSAGE,
    MAGIC_PARAMS,
    MAGIC_PUBLIC_KEY,
    MAGIC_SECRET_KEY,
    MAGIC_SIGNATURE,
    MAGIC_TAG,
    UNBOUND_DIGEST,
)
from .errors import BadMagic, ParamsMismatch, SerializationError, Truncated, UnknownHashId, VersionUnsupported
from .params import decode_params, decode_params_prefix, encode_params, params_digest
from .types import Message, Params, PublicKey, SecretKey, Signature, Tag

logger = logging.getLogger(__name__)

Decoded = Union[Params, PublicKey, SecretKey, Signature, Message, Tag]

_HEADER = struct.Struct("<4sH32s")
_U32 = struct.Struct("<I")
_DIMS = struct.Struct("<II")
_HASH_CODES = {code: name for name, code in HASH_IDS.items()}
_ENVELOPE_MAGICS = (MAGIC_PUBLIC_KEY, MAGIC_SECRET_KEY, MAGIC_SIGNATURE, MAGIC_MESSAGE, MAGIC_TAG)


class _Reader:
    """Cursor over a byte string that raises Truncated instead of reading short."""

    def __init__(self, data: bytes, offset: int = 0) -> None:
        self.data = data
        self.offset = offset

    def take(self, size: int) -> bytes:
        if size < 0 or self.offset + size > len(self.data):
            raise Truncated(f"need {size} bytes at offset {self.offset}, have {len(self.data) - self.offset}")
        chunk = self.data[self.offset:self.offset + size]
        self.offset += size
        return chunk

    def unpack(self, st: struct.Struct) -> tuple:
        return st.unpack(self.take(st.size))

    def array(self, dtype: str, count: int) -> np.ndarray:
        return np.frombuffer(self.take(8 * count), dtype=dtype).astype(np.int64)

    def finish(self) -> None:
        if self.offset != len(self.data):
            raise SerializationError(f"{len(self.data) - self.offset} trailing bytes")


def _header(magic: bytes, digest: bytes) -> bytes:
    return _HEADER.pack(magic, FORMAT_VERSION, digest)


def _residues(values: np.ndarray) -> bytes:
    return np.ascontiguousarray(values, dtype="<u8").tobytes()


def _check_residues(values: np.ndarray, q: int, what: str) -> np.ndarray:
    if values.size and (int(values.min()) < 0 or int(values.max()) >= q):
        raise SerializationError(f"{what} entry outside [0, {q})")
    return values


def digests_compatible(a: bytes, b: bytes) -> bool:
    """Two digests clash only when both are bound and differ."""
    return a == UNBOUND_DIGEST or b == UNBOUND_DIGEST or a == b


def check_digest(found: bytes, expected: Optional[bytes], what: str) -> None:
    if expected is not None and not digests_compatible(found, expected):
        raise ParamsMismatch(f"{what} is bound to params {found.hex()[:16]}..., expected {expected.hex()[:16]}...")


def encode_public_key(pk: PublicKey) -> bytes:
    params = pk.params
    return b"".join([
        _header(MAGIC_PUBLIC_KEY, params_digest(params)),
        encode_params(params),
        struct.pack("<B", HASH_IDS[pk.hash_id]),
        _residues(pk.A.reshape(-1)),
        # alpha_1, ..., alpha_k one after another
        _residues(pk.alphas.T.reshape(-1)),
    ])


def encode_secret_key(sk: SecretKey, params: Params) -> bytes:
    n = sk.T.shape[0]
    return b"".join([
        _header(MAGIC_SECRET_KEY, params_digest(params)),
        _U32.pack(n),
        np.ascontiguousarray(sk.T, dtype="<i8").tobytes(),
    ])


def encode_signature(sigma: Signature, params: Optional[Params] = None) -> bytes:
    digest = params_digest(params) if params is not None else UNBOUND_DIGEST
    return b"".join([
        _header(MAGIC_SIGNATURE, digest),
        _DIMS.pack(len(sigma), sigma.n),
        # column after column
        np.ascontiguousarray(sigma.matrix.T, dtype="<i8").tobytes(),
    ])


def encode_message(message: Message, params: Optional[Params] = None) -> bytes:
    digest = params_digest(params) if params is not None else UNBOUND_DIGEST
    parts = [_header(MAGIC_MESSAGE, digest), _U32.pack(len(message))]
    for symbol in message:
        parts.append(_U32.pack(len(symbol)))
        parts.append(symbol)
    return b"".join(parts)


def encode_tag(tag: Tag, params: Optional[Params] = None) -> bytes:
    digest = params_digest(params) if params is not None else UNBOUND_DIGEST
    packed = np.packbits(tag.bits, bitorder="little").tobytes()
    return _header(MAGIC_TAG, digest) + _U32.pack(tag.n) + packed


def encode(obj: Decoded, params: Optional[Params] = None) -> bytes:
    """Encode any domain object. params binds keys, signatures, messages and tags."""
    if isinstance(obj, Params):
        return encode_params(obj)
    if isinstance(obj, PublicKey):
        return encode_public_key(obj)
    if isinstance(obj, SecretKey):
        if params is None:
            raise SerializationError("a secret key envelope needs its params")
        return encode_secret_key(obj, params)
    if isinstance(obj, Signature):
        return encode_signature(obj, params)
    if isinstance(obj, Message):
        return encode_message(obj, params)
    if isinstance(obj, Tag):
        return encode_tag(obj, params)
    raise SerializationError(f"cannot encode {type(obj).__name__}")


def read_header(data: bytes) -> Tuple[bytes, bytes]:
    """(magic, params digest) of an envelope; params records report the unbound digest."""
    if len(data) >= 4 and data[:4] == MAGIC_PARAMS:
        return MAGIC_PARAMS, UNBOUND_DIGEST
    if len(data) < _HEADER.size:
        raise Truncated(f"envelope shorter than its {_HEADER.size}-byte header")
    magic, version, digest = _HEADER.unpack_from(data)
    if magic not in _ENVELOPE_MAGICS:
        raise BadMagic(f"unknown magic {magic!r}")
    if version != FORMAT_VERSION:
        raise VersionUnsupported(f"envelope version {version}")
    return magic, digest


def _decode_public_key(r: _Reader, digest: bytes) -> PublicKey:
    params, consumed = decode_params_prefix(r.data[r.offset:])
    r.take(consumed)
    if params_digest(params) != digest:
        raise ParamsMismatch("public key digest does not match its embedded params")
    (code,) = r.unpack(struct.Struct("<B"))
    hash_id = _HASH_CODES.get(code)
    if hash_id is None:
        raise UnknownHashId(f"unknown hash id byte {code}")
    A = _check_residues(r.array("<u8", params.h * params.n), params.q, "A").reshape(params.h, params.n)
    alphas = _check_residues(r.array("<u8", params.h * params.k), params.q, "alpha").reshape(params.k, params.h).T
    return PublicKey(params=params, A=A, alphas=np.ascontiguousarray(alphas), hash_id=hash_id)


def _decode_secret_key(r: _Reader) -> SecretKey:
    (n,) = r.unpack(_U32)
    T = r.array("<i8", n * n).reshape(n, n)
    return SecretKey(T=T)


def _decode_signature(r: _Reader) -> Signature:
    count, n = r.unpack(_DIMS)
    columns = r.array("<i8", n * count).reshape(count, n)
    return Signature(columns.T)


def _decode_message(r: _Reader) -> Message:
    (count,) = r.unpack(_U32)
    symbols = []
    for _ in range(count):
        (size,) = r.unpack(_U32)
        symbols.append(r.take(size))
    return Message(tuple(symbols))


def _decode_tag(r: _Reader) -> Tag:
    (n,) = r.unpack(_U32)
    packed = np.frombuffer(r.take((n + 7) // 8), dtype=np.uint8)
    bits = np.unpackbits(packed, bitorder="little")
    if bits[n:].any():
        raise SerializationError("nonzero padding bits in tag")
    return Tag(bits[:n])


def decode(data: bytes, expected_digest: Optional[bytes] = None) -> Decoded:
    """Decode any envelope; ParamsMismatch if its digest clashes with expected_digest."""
    magic, digest = read_header(data)
    if magic == MAGIC_PARAMS:
        return decode_params(data)
    check_digest(digest, expected_digest, magic.decode("ascii"))
    r = _Reader(data, _HEADER.size)
    obj: Decoded
    if magic == MAGIC_PUBLIC_KEY:
        obj = _decode_public_key(r, digest)
    elif magic == MAGIC_SECRET_KEY:
        obj = _decode_secret_key(r)
    elif magic == MAGIC_SIGNATURE:
        obj = _decode_signature(r)
    elif magic == MAGIC_MESSAGE:
        obj = _decode_message(r)
    else:
        obj = _decode_tag(r)
    r.finish()
    return obj


def decode_as(data: bytes, kind: type, expected_digest: Optional[bytes] = None) -> Decoded:
    obj = decode(data, expected_digest)
    if not isinstance(obj, kind):
        raise BadMagic(f"expected a {kind.__name__} envelope, got {type(obj).__name__}")
    return obj

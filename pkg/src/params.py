"""Derive, validate and serialize the public parameters of both schemes."""
import hashlib
import logging
import math
import struct
from typing import Tuple

from sympy import isprime, nextprime

from .config import (
    DEFAULT_TAIL_CUT,
    FORMAT_VERSION,
    MAGIC_PARAMS,
    MAX_DECODED_K,
    MAX_DECODED_N,
    MAX_MODULUS,
    PRESETS,
)
from .errors import (
    BadMagic,
    InvalidModulus,
    InvalidParams,
    KExceedsH,
    ParameterError,
    SerializationError,
    StrictViolation,
    Truncated,
    VersionUnsupported,
)
from .types import STRICTNESS_VALUES, Params, Strictness

logger = logging.getLogger(__name__)

# magic, version, n, q, k, h, V, s_sim, tail_cut, strictness
_RECORD = struct.Struct("<4sHQQQQddIB")
_STRICTNESS_CODES = {"paper-strict": 0, "relaxed": 1}


def row_count(n: int, q: int) -> int:
    """h = floor(n / (6 log2 q))."""
    return int(math.floor(n / (6.0 * math.log2(q))))


def gaussian_width(n: int, k: int, q: int) -> float:
    """V = k * sqrt(2 n log2 q) * log2 n, in binary64."""
    return k * math.sqrt(2.0 * n * math.log2(q)) * math.log2(n)


def derive_params(
    n: int,
    k: int,
    q: int,
    strictness: Strictness = "relaxed",
    tail_cut: int = DEFAULT_TAIL_CUT,
) -> Params:
    if strictness not in STRICTNESS_VALUES:
        raise ParameterError(f"unknown strictness {strictness!r}")
    if n < 8:
        raise ParameterError(f"n must be >= 8, got {n}")
    if k < 1:
        raise ParameterError(f"k must be >= 1, got {k}")
    if tail_cut < 1:
        raise ParameterError(f"tail_cut must be >= 1, got {tail_cut}")
    if q < 3 or q % 2 == 0:
        raise InvalidModulus(f"q must be odd and >= 3, got {q}")
    if q >= MAX_MODULUS:
        raise InvalidModulus(f"q must be < 2^31 so residue products fit 64 bits, got {q}")

    if strictness == "paper-strict":
        if q < (k * n) ** 2:
            raise StrictViolation(f"q >= (kn)^2 fails: q={q}, (kn)^2={(k * n) ** 2}")
        if not isprime(q):
            raise StrictViolation(f"q must be prime in paper-strict mode, got {q}")
    elif not isprime(q):
        raise InvalidModulus(f"q must be prime, got {q}")

    h = row_count(n, q)
    if h < 1 or k > h:
        raise KExceedsH(f"k={k} exceeds h=floor(n/(6 log2 q))={h}")

    V = gaussian_width(n, k, q)
    params = Params(
        n=n,
        q=q,
        k=k,
        h=h,
        V=V,
        s_sim=V / math.sqrt(k),
        tail_cut=tail_cut,
        strictness=strictness,
    )
    logger.debug("derived params %s", params)
    return params


def load_preset(name: str, tail_cut: int = DEFAULT_TAIL_CUT) -> Params:
    try:
        n, k, q, strictness = PRESETS[name]
    except KeyError:
        raise ParameterError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None
    if q is None:
        q = int(nextprime((k * n) ** 2 - 1))
    return derive_params(n, k, q, strictness, tail_cut)


def check_width_condition(params: Params, gs_norm: float) -> Tuple[float, bool]:
    """Return (V / ||T~||, whether it reaches sqrt(log2 n)).

    The bound is only claimed when ||T~|| <= sqrt(2 h log2 q); above that the
    flag reports the plain comparison.
    """
    ratio = params.V / gs_norm
    return ratio, ratio >= math.sqrt(math.log2(params.n))


def encode_params(params: Params) -> bytes:
    return _RECORD.pack(
        MAGIC_PARAMS,
        FORMAT_VERSION,
        params.n,
        params.q,
        params.k,
        params.h,
        params.V,
        params.s_sim,
        params.tail_cut,
        _STRICTNESS_CODES[params.strictness],
    )


def decode_params(data: bytes) -> Params:
    params, _ = decode_params_prefix(data)
    return params


def decode_params_prefix(data: bytes) -> Tuple[Params, int]:
    """Decode a params record at the start of data; return it and the bytes consumed."""
    if len(data) < 6:
        raise Truncated("params record shorter than its header")
    if data[:4] != MAGIC_PARAMS:
        raise BadMagic(f"expected {MAGIC_PARAMS!r}, got {data[:4]!r}")
    if len(data) < _RECORD.size:
        raise Truncated(f"params record needs {_RECORD.size} bytes, got {len(data)}")
    _, version, n, q, k, h, V, s_sim, tail_cut, code = _RECORD.unpack_from(data)
    if version != FORMAT_VERSION:
        raise VersionUnsupported(f"params version {version}")
    strictness = {v: s for s, v in _STRICTNESS_CODES.items()}.get(code)
    if strictness is None:
        raise SerializationError(f"unknown strictness code {code}")
    if n > MAX_DECODED_N or k > MAX_DECODED_K:
        raise InvalidParams(
            f"params record asks for n={n}, k={k}; limits are n<={MAX_DECODED_N}, k<={MAX_DECODED_K}"
        )
    params = derive_params(n, k, q, strictness, tail_cut)
    if (params.h, params.V, params.s_sim) != (h, V, s_sim):
        raise SerializationError("params record is inconsistent with its own (n, k, q)")
    return params, _RECORD.size


def params_digest(params: Params) -> bytes:
    return hashlib.sha256(encode_params(params)).digest()

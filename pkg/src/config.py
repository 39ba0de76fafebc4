"""Named parameter presets, tunable defaults and wire-format constants."""
from typing import Dict, Optional, Tuple

from .types import HashId, Strictness

# name -> (n, k, q, strictness); q=None means "smallest prime >= (kn)^2"
PRESETS: Dict[str, Tuple[int, int, Optional[int], Strictness]] = {
    "toy": (1536, 8, 257, "relaxed"),
    "paper-strict": (1536, 8, None, "paper-strict"),
    "mini": (128, 2, 257, "relaxed"),
}

DEFAULT_PRESET = "toy"

DEFAULT_TAIL_CUT = 13
DEFAULT_COEFFICIENT_BOUND = 16

SAMPLER_RETRY_CAP = 10**6
SAMPLER_BATCH = 64
ALPHA_RETRY_CAP = 64
TRAPGEN_RETRY_CAP = 16
SIM_GAMMA_RETRY_CAP = 64

NORM_RELATIVE_TOLERANCE = 1e-9
GS_RANK_TOLERANCE = 1e-9
GS_ORTHOGONALITY_TOLERANCE = 1e-6

# every mod-q product of two residues must fit a signed 64-bit word
MAX_MODULUS = 2**31

# largest dimensions accepted from a params record; T alone is n x n int64
MAX_DECODED_N = 8192
MAX_DECODED_K = 256

# recorded in the public key; the byte is the on-wire id
HASH_IDS: Dict[HashId, int] = {
    "shake256": 1,
    "shake128": 2,
}
DEFAULT_HASH_ID: HashId = "shake256"
SYMBOL_DOMAIN_TAG = b"\x01"

FORMAT_VERSION = 1
MAGIC_PARAMS = b"SGSP"
MAGIC_PUBLIC_KEY = b"SGPK"
MAGIC_SECRET_KEY = b"SGSK"
MAGIC_SIGNATURE = b"SGSG"
MAGIC_MESSAGE = b"SGMS"
MAGIC_TAG = b"SGTG"

UNBOUND_DIGEST = bytes(32)

# privacy experiment projection: bin width as a fraction of V, clipped bins
PRIVACY_BIN_FRACTION = 0.5
PRIVACY_MAX_BIN = 4

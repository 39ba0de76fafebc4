"""Shared types and data models for the signature schemes and the security harness."""
from dataclasses import dataclass, field
from typing import Any, Dict, Iterator, List, Literal, Optional, Sequence, Tuple

import numpy as np

from .errors import CoefficientOutOfRange, CoefficientOverflow, LengthMismatch

Strictness = Literal["paper-strict", "relaxed"]
HashId = Literal["shake256", "shake128"]
SchemeName = Literal["SH", "LSH"]
SignerMode = Literal["real", "simulated"]
ForgeryKind = Literal["invalid", "in-span", "outside-span", "type-I", "type-II"]
EventType = Literal["setup", "query", "answer", "forgery", "verdict", "extraction"]

STRICTNESS_VALUES: List[Strictness] = ["paper-strict", "relaxed"]


@dataclass(frozen=True)
class Params:
    """All public parameters of both schemes. Immutable."""
    n: int
    q: int
    k: int
    h: int
    V: float
    s_sim: float
    tail_cut: int
    strictness: Strictness

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "q": self.q,
            "k": self.k,
            "h": self.h,
            "V": self.V,
            "s_sim": self.s_sim,
            "tail_cut": self.tail_cut,
            "strictness": self.strictness,
        }


@dataclass(frozen=True)
class GramSchmidt:
    """Orthogonalized columns (double precision), their norms and the max norm."""
    vectors: np.ndarray
    norms: np.ndarray
    max_norm: float


@dataclass(frozen=True)
class Message:
    """A finite sequence of symbols; the empty sequence is the identity."""
    symbols: Tuple[bytes, ...] = ()

    def __post_init__(self) -> None:
        symbols = tuple(bytes(s) for s in self.symbols)
        object.__setattr__(self, "symbols", symbols)

    @classmethod
    def of(cls, *symbols: bytes) -> "Message":
        return cls(tuple(symbols))

    @classmethod
    def from_text_lines(cls, text: str) -> "Message":
        """One symbol per line, UTF-8 encoded, line terminators stripped."""
        return cls(tuple(line.encode("utf-8") for line in text.splitlines()))

    def __len__(self) -> int:
        return len(self.symbols)

    def __iter__(self) -> Iterator[bytes]:
        return iter(self.symbols)

    def __getitem__(self, i: int) -> bytes:
        return self.symbols[i]

    def is_empty(self) -> bool:
        return not self.symbols


class Signature:
    """A finite sequence of integer vectors, held as an n x count matrix."""

    __slots__ = ("matrix",)

    def __init__(self, matrix: np.ndarray) -> None:
        try:
            m = np.array(matrix, dtype=np.int64, copy=True)
        except OverflowError:
            raise CoefficientOverflow("signature entry outside the signed 64-bit range") from None
        if m.ndim != 2:
            raise LengthMismatch(f"signature matrix must be 2-D, got shape {m.shape}")
        m.setflags(write=False)
        self.matrix = m

    @classmethod
    def empty(cls, n: int) -> "Signature":
        return cls(np.zeros((n, 0), dtype=np.int64))

    @classmethod
    def from_columns(cls, columns: Sequence[np.ndarray], n: int) -> "Signature":
        if not columns:
            return cls.empty(n)
        return cls(np.column_stack([np.asarray(c, dtype=np.int64) for c in columns]))

    @property
    def n(self) -> int:
        return int(self.matrix.shape[0])

    @property
    def columns(self) -> List[np.ndarray]:
        return [self.matrix[:, i] for i in range(len(self))]

    def __len__(self) -> int:
        return int(self.matrix.shape[1])

    def is_empty(self) -> bool:
        return len(self) == 0

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Signature):
            return NotImplemented
        if self.is_empty() and other.is_empty():
            return True
        return self.matrix.shape == other.matrix.shape and bool(np.array_equal(self.matrix, other.matrix))

    def __hash__(self) -> int:
        if self.is_empty():
            return hash(b"")
        return hash((self.matrix.shape, self.matrix.tobytes()))

    def __repr__(self) -> str:
        return f"Signature(n={self.n}, count={len(self)})"


@dataclass(frozen=True)
class LinearFunctional:
    """Coefficients c_1..c_l in Z_p; applied as c_1*v_1 || ... || c_l*v_l."""
    coefficients: Tuple[int, ...]
    p: int = 16

    def __post_init__(self) -> None:
        coeffs = tuple(int(c) for c in self.coefficients)
        for c in coeffs:
            if not 0 <= c < self.p:
                raise CoefficientOutOfRange(f"coefficient {c} outside [0, {self.p})")
        object.__setattr__(self, "coefficients", coeffs)

    def __len__(self) -> int:
        return len(self.coefficients)


class Tag:
    """Data-set tag: a bit vector of length n."""

    __slots__ = ("bits",)

    def __init__(self, bits: Sequence[int]) -> None:
        b = np.array(bits, dtype=np.uint8, copy=True).reshape(-1)
        if b.size and int(b.max()) > 1:
            raise LengthMismatch("tag entries must be bits")
        b.setflags(write=False)
        self.bits = b

    @property
    def n(self) -> int:
        return int(self.bits.size)

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Tag):
            return NotImplemented
        return bool(np.array_equal(self.bits, other.bits))

    def __hash__(self) -> int:
        return hash(self.bits.tobytes())

    def __repr__(self) -> str:
        return f"Tag(n={self.n}, weight={int(self.bits.sum())})"


@dataclass(frozen=True, eq=False)
class PublicKey:
    """pk = (A, hash, alpha_1..alpha_k). alphas holds alpha_j as column j (h x k)."""
    params: Params
    A: np.ndarray
    alphas: np.ndarray
    hash_id: HashId


@dataclass(frozen=True, eq=False)
class SecretKey:
    """sk = T_A, a short basis of the kernel lattice of A (n x n, columns).

    gs caches the Gram-Schmidt data of T so repeated signing skips the QR step.
    """
    T: np.ndarray
    gs: Optional[GramSchmidt] = field(default=None, repr=False)


@dataclass(frozen=True, eq=False)
class SimTrapdoor:
    """The reduction's short vectors gamma_j (column j of an n x k matrix)."""
    gammas: np.ndarray
    s: float
    hash_id: HashId = "shake256"


@dataclass(frozen=True, eq=False)
class SisSolution:
    z: np.ndarray
    norm: float
    column: int = 0


@dataclass(frozen=True)
class TrapdoorQuality:
    gs_norm: float
    norm: float
    constant_c: float


@dataclass(frozen=True, eq=False)
class Forgery:
    """An adversary's claimed (message, signature), with a tag for the tagged scheme."""
    message: Message
    signature: Signature
    tag: Optional[Tag] = None


@dataclass
class GameEvent:
    """One record in a game transcript."""
    game_id: str
    event_id: int
    event_type: EventType
    payload: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "game_id": self.game_id,
            "event_id": self.event_id,
            "event": self.event_type,
            "payload": self.payload,
        }

    @classmethod
    def from_dict(cls, d: Dict[str, Any]) -> "GameEvent":
        return cls(
            game_id=d["game_id"],
            event_id=d["event_id"],
            event_type=d["event"],
            payload=d.get("payload", {}),
        )


@dataclass
class GameOutcome:
    """Result of one unforgeability game."""
    game_id: str
    scheme: SchemeName
    mode: SignerMode
    won: bool
    forgery_kind: ForgeryKind
    verified: bool
    queries: int
    extraction: Optional[SisSolution] = None
    extraction_attempted: bool = False
    adversary_seconds: float = 0.0
    total_seconds: float = 0.0
    transcript: List[GameEvent] = field(default_factory=list)

    @property
    def reduction_overhead_seconds(self) -> float:
        return max(0.0, self.total_seconds - self.adversary_seconds)

    def summary(self) -> Dict[str, Any]:
        return {
            "game_id": self.game_id,
            "scheme": self.scheme,
            "mode": self.mode,
            "won": int(self.won),
            "forgery_kind": self.forgery_kind,
            "verified": int(self.verified),
            "queries": self.queries,
            "extraction_attempted": int(self.extraction_attempted),
            "extraction_found": int(self.extraction is not None),
            "extraction_norm": f"{self.extraction.norm:.3f}" if self.extraction is not None else "-",
            "adversary_seconds": f"{self.adversary_seconds:.6f}",
            "total_seconds": f"{self.total_seconds:.6f}",
            "reduction_overhead_seconds": f"{self.reduction_overhead_seconds:.6f}",
        }


@dataclass
class DistanceReport:
    """Per-functional statistical distances from the privacy experiment."""
    samples: int
    bin_width: float
    column_distances: List[List[float]]

    @property
    def distances(self) -> List[float]:
        return [max(cols) if cols else 0.0 for cols in self.column_distances]

    @property
    def max_distance(self) -> float:
        return max(self.distances, default=0.0)


@dataclass
class ClosenessReport:
    """Real vs simulated signatures of fresh single symbols, projected on column norms."""
    samples: int
    distance: float
    real_mean_norm: float
    simulated_mean_norm: float
    predicted_ratio: float

    @property
    def measured_ratio(self) -> float:
        return self.simulated_mean_norm / self.real_mean_norm if self.real_mean_norm else 0.0


@dataclass
class AdvantageEstimate:
    """Aggregate over independent games."""
    games: int
    wins: int
    extractions: int
    mean_overhead_seconds: float

    @property
    def win_rate(self) -> float:
        return self.wins / self.games if self.games else 0.0

    @property
    def extraction_rate(self) -> float:
        return self.extractions / self.games if self.games else 0.0

    @property
    def reduction_loss(self) -> float:
        """win rate / extraction rate; inf when nothing was extracted."""
        if not self.extractions:
            return float("inf") if self.wins else 0.0
        return self.win_rate / self.extraction_rate


@dataclass
class QueryRecord:
    """One answered signing query: a data set, its tag (tagged scheme only), one signature per symbol."""
    query_id: int
    symbols: Tuple[bytes, ...]
    signatures: List[Signature]
    tag: Optional[Tag] = None

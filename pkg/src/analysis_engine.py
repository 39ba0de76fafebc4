"""Classifies forgeries against the StateStore and measures statistical distances."""
import logging
import math
from collections import Counter
from typing import Hashable, Iterable, List, Sequence, Tuple

import numpy as np

from .errors import EmptySamples
from .lsh_scheme import lsh_verify
from .message_encode import hash_symbol, span_contains
from .sh_scheme import sign, verify
from .simulator import sim_keygen, sim_sign
from .state_store import StateStore
from .trapdoor import trap_gen
from .types import ClosenessReport, Forgery, ForgeryKind, Message, Params, PublicKey, SecretKey

logger = logging.getLogger(__name__)


def statistical_distance(samples_x: Iterable[Hashable], samples_y: Iterable[Hashable]) -> float:
    """1/2 sum_a |P_x(a) - P_y(a)| over empirical frequencies."""
    cx, cy = Counter(samples_x), Counter(samples_y)
    nx, ny = sum(cx.values()), sum(cy.values())
    if nx == 0 or ny == 0:
        raise EmptySamples("statistical distance needs samples on both sides")
    return 0.5 * sum(abs(cx[a] / nx - cy[a] / ny) for a in set(cx) | set(cy))


def bin_values(values: Sequence[float], width: float, max_bin: int) -> List[int]:
    """floor(value / width), clipped to [-max_bin, max_bin]."""
    bins = np.floor(np.asarray(values, dtype=np.float64) / width).astype(np.int64)
    return [int(b) for b in np.clip(bins, -max_bin, max_bin)]


def histogram_bins(x: Sequence[float], y: Sequence[float], count: int = 20) -> Tuple[List[int], List[int]]:
    """Bin two samples on the same equal-width grid over their joint range."""
    edges = np.histogram_bin_edges(np.concatenate([np.asarray(x), np.asarray(y)]), bins=count)
    inner = edges[1:-1]
    return [int(i) for i in np.digitize(x, inner)], [int(i) for i in np.digitize(y, inner)]


class AnalysisEngine:
    """Decides what a claimed forgery is worth, given what the oracle handed out."""

    def __init__(self, state_store: StateStore) -> None:
        self.state_store = state_store

    def classify(self, pk: PublicKey, forgery: Forgery) -> Tuple[ForgeryKind, bool]:
        """(kind, verified). Only "outside-span", "type-I" and "type-II" are wins."""
        store = self.state_store
        if store.scheme == "SH":
            verified = bool(verify(pk, forgery.message, forgery.signature))
            if not verified:
                return "invalid", False
            if span_contains(store.queried_symbols(), forgery.message, include_empty=True):
                return "in-span", True
            return "outside-span", True

        tag = forgery.tag
        verified = tag is not None and bool(lsh_verify(pk, tag, forgery.message, forgery.signature))
        if not verified:
            return "invalid", False
        assert tag is not None
        data_set = store.symbols_for_tag(tag)
        if data_set is None:
            return "type-I", True
        if span_contains(data_set, forgery.message, include_empty=True):
            return "in-span", True
        return "type-II", True

    @staticmethod
    def is_win(kind: ForgeryKind) -> bool:
        return kind in ("outside-span", "type-I", "type-II")


def compare_real_and_simulated(params: Params, samples: int, rng: np.random.Generator) -> ClosenessReport:
    """Column norms of real vs simulated signatures on fresh symbols over one SIS instance.

    Simulated columns have width s_sim sqrt(w) for a hash of weight w, so the
    norm ratio is predicted as the mean of sqrt(w / k) over the sampled symbols.
    """
    A, T = trap_gen(params, rng)
    sk = SecretKey(T=T)
    pk_sim, trap = sim_keygen(params, A, rng)
    real_norms, sim_norms, ratios = [], [], []
    for i in range(samples):
        symbol = b"cmp-" + i.to_bytes(8, "little") + rng.bytes(8)
        x = Message.of(symbol)
        real_norms.append(float(np.linalg.norm(sign(sk, pk_sim, x, rng).matrix[:, 0])))
        sim_norms.append(float(np.linalg.norm(sim_sign(trap, x).matrix[:, 0])))
        weight = int(hash_symbol(symbol, params.k, pk_sim.hash_id).sum())
        ratios.append(math.sqrt(weight / params.k))
    real_bins, sim_bins = histogram_bins(real_norms, sim_norms)
    report = ClosenessReport(
        samples=samples,
        distance=statistical_distance(real_bins, sim_bins),
        real_mean_norm=float(np.mean(real_norms)),
        simulated_mean_norm=float(np.mean(sim_norms)),
        predicted_ratio=float(np.mean(ratios)),
    )
    logger.info(
        "real vs simulated: distance=%.4f measured ratio=%.4f predicted ratio=%.4f",
        report.distance, report.measured_ratio, report.predicted_ratio,
    )
    return report

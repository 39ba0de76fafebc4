"""Game flow: setup, query/answer rounds, forgery, verdict and (simulated mode) extraction."""
import hashlib
import logging
import time
from pathlib import Path
from typing import Callable, Optional

import numpy as np

from .adversaries import Adversary
from .analysis_engine import AnalysisEngine
from .errors import MalformedAdversaryOutput
from .params import params_digest
from .serde import encode_public_key
from .sh_scheme import gen
from .signing_oracle import SigningOracle
from .simulator import extract_sis, sim_keygen
from .state_store import StateStore
from .transcript_manager import TranscriptManager
from .trapdoor import trap_gen
from .types import (
    AdvantageEstimate,
    Forgery,
    GameOutcome,
    Message,
    Params,
    SchemeName,
    SecretKey,
    Signature,
    SignerMode,
    SimTrapdoor,
    Tag,
)

logger = logging.getLogger(__name__)


def _check_forgery(scheme: SchemeName, forgery: object) -> Forgery:
    if not isinstance(forgery, Forgery):
        raise MalformedAdversaryOutput(f"adversary returned {type(forgery).__name__}, not a Forgery")
    if not isinstance(forgery.message, Message) or not isinstance(forgery.signature, Signature):
        raise MalformedAdversaryOutput("forgery must hold a Message and a Signature")
    if scheme == "LSH" and not isinstance(forgery.tag, Tag):
        raise MalformedAdversaryOutput("a tagged forgery needs a Tag")
    return forgery


class GameOrchestrator:
    """Runs unforgeability games; optionally persists each transcript and summary."""

    def __init__(self, transcripts_dir: Optional[Path] = None) -> None:
        self.transcript_manager = TranscriptManager(str(transcripts_dir)) if transcripts_dir else None

    def play(
        self,
        scheme: SchemeName,
        adversary: Adversary,
        params: Params,
        query_budget: int,
        rng: np.random.Generator,
        mode: SignerMode = "real",
        leak_trapdoor: bool = False,
        deduplicate_queries: bool = True,
    ) -> GameOutcome:
        started = time.perf_counter()
        game_id = rng.bytes(8).hex()
        store = StateStore(game_id, scheme, mode, query_budget)

        trap: Optional[SimTrapdoor] = None
        if mode == "real":
            pk, sk = gen(params, rng)
        else:
            A, T = trap_gen(params, rng)
            sk = SecretKey(T=T)
            pk, trap = sim_keygen(params, A, rng)
        store.log_event(
            "setup",
            scheme=scheme,
            mode=mode,
            adversary=adversary.name,
            params_digest=params_digest(params).hex(),
            public_key_sha256=hashlib.sha256(encode_public_key(pk)).hexdigest(),
            query_budget=query_budget,
            leak_trapdoor=leak_trapdoor,
        )

        oracle = SigningOracle(
            store,
            pk,
            rng,
            sk=sk if mode == "real" else None,
            trap=trap,
            leaked=sk if leak_trapdoor else None,
            deduplicate_queries=deduplicate_queries,
        )
        store.set_phase("queries")
        attack_started = time.perf_counter()
        forgery = _check_forgery(scheme, adversary.attack(pk, oracle))
        adversary_seconds = max(0.0, time.perf_counter() - attack_started - oracle.seconds)

        store.set_phase("forgery")
        store.log_event(
            "forgery",
            message=[s.hex() for s in forgery.message],
            signature=np.ascontiguousarray(forgery.signature.matrix.T, dtype="<i8").tobytes().hex(),
            tag=np.packbits(forgery.tag.bits, bitorder="little").tobytes().hex() if forgery.tag is not None else None,
        )
        engine = AnalysisEngine(store)
        kind, verified = engine.classify(pk, forgery)
        won = engine.is_win(kind)
        store.log_event("verdict", kind=kind, verified=verified, won=won)

        extraction = None
        attempted = False
        if mode == "simulated" and won:
            assert trap is not None
            attempted = True
            extraction = extract_sis(pk, trap, forgery)
            store.log_event(
                "extraction",
                found=extraction is not None,
                column=extraction.column if extraction is not None else None,
                norm=round(extraction.norm, 6) if extraction is not None else None,
                z=np.ascontiguousarray(extraction.z, dtype="<i8").tobytes().hex() if extraction is not None else None,
            )
        store.set_phase("ended")

        outcome = GameOutcome(
            game_id=game_id,
            scheme=scheme,
            mode=mode,
            won=won,
            forgery_kind=kind,
            verified=verified,
            queries=store.queries_made,
            extraction=extraction,
            extraction_attempted=attempted,
            adversary_seconds=adversary_seconds,
            total_seconds=time.perf_counter() - started,
            transcript=store.events,
        )
        logger.info(
            "game %s %s/%s adversary=%s: kind=%s won=%s extraction=%s",
            game_id, scheme, mode, adversary.name, kind, won,
            "found" if extraction is not None else ("none" if attempted else "-"),
        )
        if self.transcript_manager is not None:
            self.transcript_manager.write_transcript(game_id, outcome.transcript)
            self.transcript_manager.write_summary(game_id, outcome.summary())
        return outcome

    def estimate_advantage(
        self,
        scheme: SchemeName,
        make_adversary: Callable[[np.random.Generator], Adversary],
        params: Params,
        query_budget: int,
        games: int,
        rng: np.random.Generator,
        mode: SignerMode = "simulated",
        leak_trapdoor: bool = True,
    ) -> AdvantageEstimate:
        """Empirical win and extraction rates over independent games."""
        wins = extractions = 0
        overhead = 0.0
        for _ in range(games):
            child = np.random.default_rng(int(rng.integers(0, 2**63)))
            adversary = make_adversary(np.random.default_rng(int(rng.integers(0, 2**63))))
            outcome = self.play(scheme, adversary, params, query_budget, child, mode, leak_trapdoor)
            wins += int(outcome.won)
            extractions += int(outcome.extraction is not None)
            overhead += outcome.reduction_overhead_seconds
        estimate = AdvantageEstimate(
            games=games,
            wins=wins,
            extractions=extractions,
            mean_overhead_seconds=overhead / games if games else 0.0,
        )
        logger.info(
            "advantage over %d games: win rate %.4f, extraction rate %.4f, loss %.4f",
            games, estimate.win_rate, estimate.extraction_rate, estimate.reduction_loss,
        )
        return estimate


def run_euf_cma_fmr(
    scheme: SchemeName,
    adversary: Adversary,
    params: Params,
    query_budget: int,
    rng: np.random.Generator,
    mode: SignerMode = "real",
    leak_trapdoor: bool = False,
    deduplicate_queries: bool = True,
    transcripts_dir: Optional[Path] = None,
) -> GameOutcome:
    return GameOrchestrator(transcripts_dir).play(
        scheme, adversary, params, query_budget, rng, mode, leak_trapdoor, deduplicate_queries
    )

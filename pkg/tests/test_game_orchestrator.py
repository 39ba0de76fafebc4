import logging

import numpy as np
import pytest

from src.adversaries import (
    ADVERSARIES,
    Adversary,
    ConcatAdversary,
    RandomSignatureAdversary,
    ReplayAdversary,
    TrapdoorLeakAdversary,
)
from src.errors import MalformedAdversaryOutput, PolicyViolation, QueryBudgetExceeded
from src.game_orchestrator import GameOrchestrator, run_euf_cma_fmr
from src.types import Forgery, Message
from src.zq_linalg import matrix_norm


class RepeatAdversary(Adversary):
    name = "repeat"

    def attack(self, pk, oracle):
        first = oracle.sign(b"same")
        second = oracle.sign(b"same")
        assert first == second
        return Forgery(Message.of(b"same"), first)


class WrongOracleAdversary(Adversary):
    name = "wrong-oracle"

    def attack(self, pk, oracle):
        oracle.sign_dataset([b"x"])
        raise AssertionError("unreachable")


class NoneAdversary(Adversary):
    name = "none"

    def attack(self, pk, oracle):
        return None


class UntaggedAdversary(Adversary):
    name = "untagged"

    def attack(self, pk, oracle):
        tag, sigmas = oracle.sign_dataset([b"x"])
        return Forgery(Message.of(b"x"), sigmas[0])


def _play(scheme, adversary, params, mode="real", leak=False, budget=4, seed=1, **kwargs):
    return run_euf_cma_fmr(scheme, adversary, params, budget, np.random.default_rng(seed), mode, leak, **kwargs)


@pytest.mark.parametrize("mode", ["real", "simulated"])
@pytest.mark.parametrize("scheme", ["SH", "LSH"])
@pytest.mark.parametrize("adversary_cls", [ReplayAdversary, ConcatAdversary])
def test_homomorphic_adversaries_never_win(mini_params, scheme, mode, adversary_cls):
    outcome = _play(scheme, adversary_cls(np.random.default_rng(2)), mini_params, mode)
    assert outcome.verified
    assert outcome.forgery_kind == "in-span"
    assert not outcome.won
    assert not outcome.extraction_attempted


@pytest.mark.parametrize("scheme", ["SH", "LSH"])
def test_random_signature_is_invalid(mini_params, scheme):
    outcome = _play(scheme, RandomSignatureAdversary(np.random.default_rng(3)), mini_params)
    assert outcome.forgery_kind == "invalid"
    assert not outcome.won
    assert outcome.queries == 0


def test_leaked_trapdoor_wins_and_extracts_untagged(mini_params):
    outcome = _play("SH", TrapdoorLeakAdversary(np.random.default_rng(4)), mini_params, "simulated", leak=True)
    assert outcome.won and outcome.forgery_kind == "outside-span"
    assert outcome.extraction_attempted
    assert outcome.extraction is not None
    assert np.any(outcome.extraction.z)
    assert outcome.transcript[-1].event_type == "extraction"
    assert outcome.transcript[-1].payload["found"] is True


def test_leaked_trapdoor_in_real_mode_wins_without_extraction(mini_params):
    outcome = _play("SH", TrapdoorLeakAdversary(np.random.default_rng(4)), mini_params, "real", leak=True)
    assert outcome.won
    assert not outcome.extraction_attempted and outcome.extraction is None


def test_no_leak_means_no_win(mini_params):
    outcome = _play("SH", TrapdoorLeakAdversary(np.random.default_rng(4)), mini_params, "simulated")
    assert outcome.forgery_kind == "invalid"


def test_type_one_forgery(mini_params):
    outcome = _play("LSH", TrapdoorLeakAdversary(np.random.default_rng(5)), mini_params, "simulated", leak=True)
    assert outcome.forgery_kind == "type-I"
    assert outcome.extraction is not None


def test_type_two_forgery(mini_params):
    adversary = TrapdoorLeakAdversary(np.random.default_rng(6), under_queried_tag=True)
    outcome = _play("LSH", adversary, mini_params, "simulated", leak=True)
    assert outcome.forgery_kind == "type-II"
    assert outcome.queries == 1
    assert outcome.extraction is not None
    assert matrix_norm(outcome.extraction.z) == pytest.approx(outcome.extraction.norm)


def test_query_budget(mini_params):
    with pytest.raises(QueryBudgetExceeded):
        _play("SH", ConcatAdversary(np.random.default_rng(7)), mini_params, budget=1)
    # one data set is one query
    outcome = _play("LSH", ConcatAdversary(np.random.default_rng(7)), mini_params, budget=1)
    assert outcome.queries == 1


def test_repeated_queries_are_answered_from_cache(mini_params, caplog):
    with caplog.at_level(logging.WARNING):
        outcome = _play("SH", RepeatAdversary(), mini_params)
    assert outcome.queries == 2
    assert "repeated query" in caplog.text
    assert [e.event_type for e in outcome.transcript].count("answer") == 2


def test_oracle_refuses_the_other_scheme(mini_params):
    with pytest.raises(PolicyViolation):
        _play("SH", WrongOracleAdversary(), mini_params)


@pytest.mark.parametrize(
    "scheme, adversary", [("SH", NoneAdversary()), ("LSH", UntaggedAdversary())]
)
def test_malformed_adversary_output(mini_params, scheme, adversary):
    with pytest.raises(MalformedAdversaryOutput):
        _play(scheme, adversary, mini_params)


def test_event_sequence(mini_params):
    outcome = _play("SH", ReplayAdversary(np.random.default_rng(8)), mini_params)
    assert [e.event_type for e in outcome.transcript] == ["setup", "query", "answer", "forgery", "verdict"]
    assert [e.event_id for e in outcome.transcript] == list(range(5))
    assert {e.game_id for e in outcome.transcript} == {outcome.game_id}
    assert outcome.transcript[0].payload["adversary"] == "replay"


@pytest.mark.parametrize("mode", ["real", "simulated"])
def test_seeded_games_are_reproducible(mini_params, mode):
    runs = [
        _play("LSH", ConcatAdversary(np.random.default_rng(9)), mini_params, mode, seed=10)
        for _ in range(2)
    ]
    assert runs[0].game_id == runs[1].game_id
    assert [e.to_dict() for e in runs[0].transcript] == [e.to_dict() for e in runs[1].transcript]


def test_transcripts_are_written(mini_params, tmp_path):
    outcome = _play("SH", ReplayAdversary(np.random.default_rng(11)), mini_params, transcripts_dir=tmp_path)
    orchestrator = GameOrchestrator(tmp_path)
    manager = orchestrator.transcript_manager
    assert manager is not None
    assert manager.transcript_path(outcome.game_id).exists()
    assert [e.to_dict() for e in manager.read_transcript(outcome.game_id)] == [
        e.to_dict() for e in outcome.transcript
    ]
    summary = manager.read_summary(outcome.game_id)
    assert summary["won"] == "0"
    assert summary["forgery_kind"] == "in-span"


def test_estimate_advantage(mini_params):
    estimate = GameOrchestrator().estimate_advantage(
        "SH", TrapdoorLeakAdversary, mini_params, 2, 3, np.random.default_rng(12)
    )
    assert estimate.games == 3
    assert estimate.wins == 3 and estimate.extractions == 3
    assert estimate.win_rate == 1.0
    assert estimate.reduction_loss == pytest.approx(1.0)


def test_adversary_registry():
    assert set(ADVERSARIES) == {"replay", "concat", "random-sigma", "trapdoor-leak"}

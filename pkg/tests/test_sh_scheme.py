import logging

import numpy as np
import pytest
from scipy import stats

from src.errors import InvariantViolation, PolicyViolation, UnknownHashId
from src.sh_scheme import (
    check_key_pair,
    gen,
    hom_concat,
    norm_bound,
    sample_alphas,
    sign,
    verify,
)
from src.types import Message, PublicKey, SecretKey, Signature
from src.zq_linalg import is_linearly_independent, matrix_norm


def test_sign_then_verify(mini_keys, rng):
    pk, sk = mini_keys
    x = Message.of(b"one", b"two", b"three")
    sigma = sign(sk, pk, x, rng)
    assert len(sigma) == 3 and sigma.n == pk.params.n
    assert verify(pk, x, sigma) == 1
    assert matrix_norm(sigma.matrix) <= norm_bound(pk.params)


def test_empty_message_signs_to_the_empty_signature(mini_keys, rng):
    pk, sk = mini_keys
    sigma = sign(sk, pk, Message(), rng)
    assert sigma.is_empty()
    assert verify(pk, Message(), sigma) == 1
    assert verify(pk, Message(), Signature.empty(7)) == 1


def test_tampered_signature_is_rejected(mini_keys, rng):
    pk, sk = mini_keys
    x = Message.of(b"payload")
    sigma = sign(sk, pk, x, rng)
    i = int(np.nonzero(np.any(pk.A % pk.params.q, axis=0))[0][0])
    tampered = sigma.matrix.copy()
    tampered[i, 0] += 1
    assert verify(pk, x, Signature(tampered)) == 0


def test_scaled_signature_breaks_the_norm_bound(mini_keys, rng):
    pk, sk = mini_keys
    x = Message.of(b"payload")
    sigma = sign(sk, pk, x, rng)
    # same syndrome mod q, far too long
    assert verify(pk, x, Signature(sigma.matrix * (pk.params.q + 1))) == 0


def test_shape_mismatches_are_rejected(mini_keys, rng):
    pk, sk = mini_keys
    x = Message.of(b"a", b"b")
    sigma = sign(sk, pk, x, rng)
    assert verify(pk, Message.of(b"a"), sigma) == 0
    assert verify(pk, x, Signature(np.zeros((pk.params.n + 1, 2)))) == 0


def test_huge_entries_do_not_raise(mini_keys):
    pk, _ = mini_keys
    column = np.full((pk.params.n, 1), 2**62, dtype=np.int64)
    assert verify(pk, Message.of(b"a"), Signature(column)) == 0


def test_homomorphic_concatenation(mini_keys, rng):
    pk, sk = mini_keys
    x, y = Message.of(b"left"), Message.of(b"right", b"more")
    joined = hom_concat(sign(sk, pk, x, rng), sign(sk, pk, y, rng))
    assert verify(pk, Message.of(b"left", b"right", b"more"), joined) == 1


def test_single_symbol_policy(mini_keys, rng):
    pk, sk = mini_keys
    with pytest.raises(PolicyViolation):
        sign(sk, pk, Message.of(b"a", b"b"), rng, single_symbol_only=True)
    assert len(sign(sk, pk, Message.of(b"a"), rng, single_symbol_only=True)) == 1


def test_random_short_signatures_do_not_verify(mini_keys, rng):
    pk, _ = mini_keys
    for i in range(50):
        column = rng.integers(-3, 4, size=(pk.params.n, 1))
        assert verify(pk, Message.of(b"r%d" % i), Signature(column)) == 0


def test_key_pair_contract(mini_keys):
    pk, sk = mini_keys
    check_key_pair(pk, sk)
    assert is_linearly_independent(pk.alphas, pk.params.q)


def test_key_pair_full_certificate(micro_params):
    pk, sk = gen(micro_params, np.random.default_rng(3))
    check_key_pair(pk, sk, full=True)
    doubled = sk.T.copy()
    doubled[:, 0] *= 2
    with pytest.raises(InvariantViolation):
        check_key_pair(pk, SecretKey(T=doubled), full=True)


def test_key_pair_rejects_dependent_alphas(mini_keys):
    pk, sk = mini_keys
    alphas = np.column_stack([pk.alphas[:, 0], pk.alphas[:, 0]])
    broken = PublicKey(params=pk.params, A=pk.A, alphas=alphas, hash_id=pk.hash_id)
    with pytest.raises(InvariantViolation):
        check_key_pair(broken, sk)


def test_key_pair_rejects_a_foreign_trapdoor(mini_keys, mini_trapdoor):
    pk, _ = mini_keys
    _, other = mini_trapdoor
    with pytest.raises(InvariantViolation):
        check_key_pair(pk, other)


def test_gen_rejects_unknown_hash(micro_params, rng):
    with pytest.raises(UnknownHashId):
        gen(micro_params, rng, "md5")


def test_gen_logs_the_trapdoor_quality(micro_params, caplog):
    with caplog.at_level(logging.INFO, logger="src.sh_scheme"):
        gen(micro_params, np.random.default_rng(4))
    assert "C=" in caplog.text


def test_shake128_keys_round_trip(micro_params, rng):
    pk, sk = gen(micro_params, np.random.default_rng(5), "shake128")
    assert pk.hash_id == "shake128"
    x = Message.of(b"a", b"b")
    assert verify(pk, x, sign(sk, pk, x, rng)) == 1


def test_sample_alphas_are_independent_and_uniform(mini_params):
    rng = np.random.default_rng(23)
    entries = []
    for _ in range(2000):
        alphas, rounds = sample_alphas(mini_params, rng)
        assert rounds >= 1
        assert alphas.shape == (mini_params.h, mini_params.k)
        entries.append(alphas.reshape(-1))
    observed = np.bincount(np.concatenate(entries), minlength=mini_params.q)
    _, p = stats.chisquare(observed)
    assert p > 0.001

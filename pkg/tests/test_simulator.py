import logging
import math

import numpy as np
import pytest
from scipy import stats

from src.analysis_engine import statistical_distance
from src.errors import GenerationFailed, NotAForgery
from src.lsh_scheme import lsh_sign, lsh_verify, random_tag
from src.message_encode import hash_symbol
from src.params import load_preset
from src.sh_scheme import sample_alphas, sign, verify
from src.simulator import extract_sis, lsh_sim_sign, sim_keygen, sim_sign
from src.types import Forgery, Message, Signature
from src.zq_linalg import is_linearly_independent, matmul_mod_q


@pytest.fixture(scope="module")
def simulated(mini_params, mini_trapdoor):
    A, _ = mini_trapdoor
    return sim_keygen(mini_params, A, np.random.default_rng(29))


def _symbol_with_hash_weight(k: int, weight: int) -> bytes:
    for i in range(10_000):
        symbol = b"w%d" % i
        if int(hash_symbol(symbol, k).sum()) == weight:
            return symbol
    raise AssertionError("no symbol with the requested hash weight")


def test_sim_keygen_publishes_short_preimages(mini_params, mini_trapdoor, simulated):
    A, _ = mini_trapdoor
    pk, trap = simulated
    assert np.array_equal(pk.A, A)
    assert trap.gammas.shape == (mini_params.n, mini_params.k)
    assert np.array_equal(pk.alphas, matmul_mod_q(A, trap.gammas, mini_params.q))
    assert is_linearly_independent(pk.alphas, mini_params.q)
    bound = mini_params.s_sim * math.sqrt(mini_params.n)
    assert all(np.linalg.norm(g) <= bound for g in trap.gammas.T)


def test_sim_keygen_rejects_a_wrong_shape(mini_params, rng):
    with pytest.raises(GenerationFailed):
        sim_keygen(mini_params, np.zeros((mini_params.h + 1, mini_params.n)), rng)


def test_simulated_signatures_verify(simulated):
    pk, trap = simulated
    x = Message.of(*(b"sym-%d" % i for i in range(20)))
    sigma = sim_sign(trap, x)
    assert verify(pk, x, sigma) == 1
    assert sim_sign(trap, x) == sigma


def test_zero_hash_symbol_signs_to_zero(mini_params, simulated):
    pk, trap = simulated
    symbol = _symbol_with_hash_weight(mini_params.k, 0)
    sigma = sim_sign(trap, Message.of(symbol))
    assert not np.any(sigma.matrix)
    assert verify(pk, Message.of(symbol), sigma) == 1


def test_tagged_simulated_signatures_verify(simulated, rng):
    pk, trap = simulated
    tag = random_tag(pk.params.n, rng)
    v = Message.of(b"d1", b"d2", b"d3")
    assert lsh_verify(pk, tag, v, lsh_sim_sign(trap, tag, v)) == 1


def test_extraction_from_a_replayed_signature_finds_nothing(simulated, caplog):
    pk, trap = simulated
    x = Message.of(b"replayed")
    with caplog.at_level(logging.WARNING):
        assert extract_sis(pk, trap, Forgery(x, sim_sign(trap, x))) is None
    assert "no solution" in caplog.text


def test_extraction_from_a_real_forgery(mini_params, mini_trapdoor, simulated, rng):
    A, sk = mini_trapdoor
    pk, trap = simulated
    symbol = _symbol_with_hash_weight(mini_params.k, 1)
    x = Message.of(symbol)
    forged = sign(sk, pk, x, rng)
    solution = extract_sis(pk, trap, Forgery(x, forged))
    assert solution is not None
    assert np.any(solution.z)
    assert not np.any(matmul_mod_q(A, solution.z.reshape(-1, 1), mini_params.q))
    assert solution.norm <= 2 * mini_params.V * math.sqrt(mini_params.k * mini_params.n)
    assert solution.column == 0


def test_extraction_from_a_tagged_forgery(mini_params, mini_trapdoor, simulated, rng):
    A, sk = mini_trapdoor
    pk, trap = simulated
    tag = random_tag(mini_params.n, rng)
    x = Message.of(b"tagged-forgery")
    forged = lsh_sign(sk, pk, tag, x, rng)
    solution = extract_sis(pk, trap, Forgery(x, forged, tag))
    assert solution is not None
    assert not np.any(matmul_mod_q(A, solution.z.reshape(-1, 1), mini_params.q))


def test_extraction_needs_a_valid_forgery(simulated):
    pk, trap = simulated
    bogus = Signature(np.ones((pk.params.n, 1), dtype=np.int64))
    with pytest.raises(NotAForgery):
        extract_sis(pk, trap, Forgery(Message.of(b"x"), bogus))


@pytest.mark.parametrize("preset, keys", [("mini", 1000), pytest.param("toy", 200, marks=pytest.mark.slow)])
def test_simulated_alphas_look_uniform(preset, keys):
    params = load_preset(preset)
    rng = np.random.default_rng(31)
    A = rng.integers(0, params.q, size=(params.h, params.n), dtype=np.int64)
    observed = np.zeros(params.q, dtype=np.int64)
    for _ in range(keys):
        pk, _ = sim_keygen(params, A, rng)
        observed += np.bincount(pk.alphas.reshape(-1), minlength=params.q)
    _, p = stats.chisquare(observed)
    assert p > 0.001


@pytest.mark.slow
def test_real_and_simulated_alphas_agree(mini_params, mini_trapdoor):
    # one fixed coordinate, split at q/2
    A, _ = mini_trapdoor
    rng = np.random.default_rng(37)
    half = mini_params.q // 2
    real = [int(sample_alphas(mini_params, rng)[0][0, 0] < half) for _ in range(10_000)]
    simulated = [int(sim_keygen(mini_params, A, rng)[0].alphas[0, 0] < half) for _ in range(10_000)]
    assert statistical_distance(real, simulated) < 0.02

import numpy as np
import pytest

from src.analysis_engine import (
    AnalysisEngine,
    bin_values,
    compare_real_and_simulated,
    histogram_bins,
    statistical_distance,
)
from src.errors import EmptySamples
from src.lsh_scheme import lsh_sign, random_tag
from src.sh_scheme import sign
from src.state_store import StateStore
from src.types import Forgery, Message, Signature


def test_statistical_distance():
    assert statistical_distance([1, 2, 3], [3, 2, 1]) == 0.0
    assert statistical_distance([1, 1], [2, 2]) == 1.0
    assert statistical_distance([0, 0, 1, 1], [0, 1, 1, 1]) == pytest.approx(0.25)
    with pytest.raises(EmptySamples):
        statistical_distance([], [1])


def test_bin_values_clips():
    assert bin_values([-1000.0, 0.0, 0.4, 1.5, -0.5, 1000.0], 1.0, 4) == [-4, 0, 0, 1, -1, 4]


def test_histogram_bins_share_a_grid():
    x, y = histogram_bins([0.0, 1.0, 2.0], [9.0, 10.0], count=5)
    assert len(x) == 3 and len(y) == 2
    assert x[0] == 0 and y[-1] == 4
    assert all(0 <= b < 5 for b in x + y)


def test_classify_untagged(mini_keys, rng):
    pk, sk = mini_keys
    store = StateStore("g", "SH", "real", 4)
    queried = Message.of(b"q1")
    sigma_q = sign(sk, pk, queried, rng)
    store.add_record(queried.symbols, [sigma_q])
    engine = AnalysisEngine(store)

    assert engine.classify(pk, Forgery(queried, sigma_q)) == ("in-span", True)
    doubled = Message.of(b"q1", b"q1")
    assert engine.classify(pk, Forgery(doubled, sign(sk, pk, doubled, rng))) == ("in-span", True)
    assert engine.classify(pk, Forgery(Message(), Signature.empty(pk.params.n))) == ("in-span", True)

    fresh = Message.of(b"never-asked")
    assert engine.classify(pk, Forgery(fresh, sign(sk, pk, fresh, rng))) == ("outside-span", True)
    assert engine.classify(pk, Forgery(fresh, Signature(sigma_q.matrix * 300))) == ("invalid", False)


def test_classify_tagged(mini_keys, rng):
    pk, sk = mini_keys
    store = StateStore("g", "LSH", "real", 4)
    tag = random_tag(pk.params.n, rng)
    data = Message.of(b"d1", b"d2")
    store.add_record(data.symbols, [lsh_sign(sk, pk, tag, Message.of(s), rng) for s in data], tag)
    engine = AnalysisEngine(store)

    in_span = Message.of(b"d2", b"d1", b"d1")
    assert engine.classify(pk, Forgery(in_span, lsh_sign(sk, pk, tag, in_span, rng), tag)) == ("in-span", True)
    outside = Message.of(b"d3")
    assert engine.classify(pk, Forgery(outside, lsh_sign(sk, pk, tag, outside, rng), tag)) == ("type-II", True)
    fresh_tag = random_tag(pk.params.n, rng)
    assert engine.classify(pk, Forgery(data, lsh_sign(sk, pk, fresh_tag, data, rng), fresh_tag)) == ("type-I", True)
    assert engine.classify(pk, Forgery(data, Signature.empty(pk.params.n), None)) == ("invalid", False)


def test_wins():
    assert AnalysisEngine.is_win("outside-span")
    assert AnalysisEngine.is_win("type-I") and AnalysisEngine.is_win("type-II")
    assert not AnalysisEngine.is_win("in-span")
    assert not AnalysisEngine.is_win("invalid")


def test_real_and_simulated_norm_ratio(mini_params):
    report = compare_real_and_simulated(mini_params, 200, np.random.default_rng(31))
    assert report.samples == 200
    assert 0.0 <= report.distance <= 1.0
    assert report.real_mean_norm > 0
    assert report.measured_ratio == pytest.approx(report.predicted_ratio, rel=0.15)

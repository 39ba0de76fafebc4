import logging

import numpy as np
import streamlit as st

from src.adversaries import ADVERSARIES
from src.analysis_engine import compare_real_and_simulated
from src.config import PRESETS
from src.game_orchestrator import GameOrchestrator
from src.lsh_scheme import combine, combine_messages, lsh_sign, lsh_verify, random_tag
from src.params import load_preset
from src.privacy import run_privacy_experiment
from src.sh_scheme import gen, hom_concat, key_gram_schmidt, sign, verify
from src.trapdoor import trapdoor_quality
from src.types import LinearFunctional, Message

logging.basicConfig(level=logging.INFO)


def _rng() -> np.random.Generator:
    rng = st.session_state.get("rng")
    if rng is None:
        rng = np.random.default_rng(int(st.session_state.get("seed", 1)))
        st.session_state["rng"] = rng
    return rng


def _generate_keys(preset: str, seed: int) -> None:
    st.session_state["seed"] = seed
    st.session_state["rng"] = np.random.default_rng(seed)
    params = load_preset(preset)
    pk, sk = gen(params, _rng())
    st.session_state["keys"] = (pk, sk)
    st.session_state["signed"] = []


st.set_page_config(page_title="Homomorphic lattice signatures", page_icon="🔏", layout="centered")
st.title("Homomorphic lattice signatures")

with st.sidebar:
    st.header("Keys")
    preset = st.selectbox("Preset", options=sorted(PRESETS), index=sorted(PRESETS).index("mini"))
    seed = st.number_input("Seed", min_value=0, max_value=2**31 - 1, value=1, step=1)
    if st.button("Generate keys", type="primary"):
        with st.spinner("Generating trapdoor..."):
            _generate_keys(preset, int(seed))

keys = st.session_state.get("keys")
if not keys:
    st.info("Pick a preset and click **Generate keys** in the sidebar to begin.")
    st.stop()

pk, sk = keys
params = pk.params
quality = trapdoor_quality(sk.T, params, key_gram_schmidt(sk))
cols = st.columns(4)
cols[0].metric("n", params.n)
cols[1].metric("h", params.h)
cols[2].metric("q", params.q)
cols[3].metric("C", f"{quality.constant_c:.3f}")
st.caption(f"V = {params.V:.2f}, verification bound V·√(kn) = {params.V * np.sqrt(params.k * params.n):.1f}")

st.subheader("Sign and concatenate")
symbol = st.text_input("Symbol", placeholder="one symbol to sign")
if st.button("Sign", disabled=not symbol.strip()):
    x = Message.of(symbol.strip().encode("utf-8"))
    st.session_state["signed"].append((x, sign(sk, pk, x, _rng())))
    st.rerun()

signed = st.session_state.get("signed", [])
if not signed:
    st.caption("Nothing signed yet.")
else:
    for x, sigma in signed[-10:]:
        ok = verify(pk, x, sigma)
        (st.success if ok else st.error)(f"{x[0].decode('utf-8', 'replace')}: {'ACCEPT' if ok else 'REJECT'}")
    if len(signed) >= 2 and st.button("Concatenate all"):
        message, sigma = signed[0]
        for x, s in signed[1:]:
            message, sigma = Message(message.symbols + x.symbols), hom_concat(sigma, s)
        ok = verify(pk, message, sigma)
        (st.success if ok else st.error)(f"{len(message)} symbols concatenated: {'ACCEPT' if ok else 'REJECT'}")

st.subheader("Tagged data set")
data_set = st.text_input("Symbols (comma separated)", value="a,b")
coeffs = st.text_input("Coefficients", value="1,2")
if st.button("Sign data set and combine"):
    try:
        symbols = [s.strip().encode("utf-8") for s in data_set.split(",") if s.strip()]
        cs = [int(c) for c in coeffs.split(",") if c.strip()]
        tag = random_tag(params.n, _rng())
        messages = [Message.of(s) for s in symbols]
        sigmas = [lsh_sign(sk, pk, tag, m, _rng()) for m in messages]
        combined = combine(pk, tag, list(zip(cs, sigmas)))
        y = combine_messages(messages, cs)
        ok = lsh_verify(pk, tag, y, combined)
        (st.success if ok else st.error)(f"combined message of {len(y)} symbols: {'ACCEPT' if ok else 'REJECT'}")
    except Exception as e:
        st.error(str(e))

st.subheader("Security harness")
c1, c2, c3 = st.columns(3)
scheme = c1.selectbox("Scheme", options=["SH", "LSH"])
adversary_name = c2.selectbox("Adversary", options=sorted(ADVERSARIES), index=sorted(ADVERSARIES).index("trapdoor-leak"))
mode = c3.selectbox("Signer", options=["simulated", "real"])
leak = st.checkbox("Leak the trapdoor to the adversary", value=True)
if st.button("Run game"):
    with st.spinner("Playing..."):
        adversary = ADVERSARIES[adversary_name](np.random.default_rng(int(seed)))
        outcome = GameOrchestrator().play(scheme, adversary, params, 8, _rng(), mode, leak)
    st.json(outcome.summary())

if st.button("Compare real and simulated signatures (200 samples)"):
    with st.spinner("Sampling..."):
        report = compare_real_and_simulated(params, 200, _rng())
    st.write(
        f"distance {report.distance:.4f}, norm ratio {report.measured_ratio:.4f} "
        f"(predicted {report.predicted_ratio:.4f})"
    )

if st.button("Context hiding (200 samples)"):
    with st.spinner("Sampling..."):
        report = run_privacy_experiment(
            params, (b"shared", b"left"), (b"shared", b"right"), [LinearFunctional((2, 0))], 200, _rng(), keys=keys
        )
    st.write(f"distances per functional: {[round(d, 4) for d in report.distances]}")

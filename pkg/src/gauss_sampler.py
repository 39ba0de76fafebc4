"""Discrete Gaussian sampling over Z, Z^n, lattice cosets and the kernel lattice.

All randomness comes from a caller-supplied ``numpy.random.Generator``; nothing
here touches a global RNG.
"""
import itertools
import logging
import math
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np

from .config import DEFAULT_TAIL_CUT, SAMPLER_BATCH, SAMPLER_RETRY_CAP
from .errors import LengthMismatch, SamplerStuck
from .types import GramSchmidt
from .zq_linalg import gram_schmidt, mat_mod_q, solve_particular

logger = logging.getLogger(__name__)


def rho(x: np.ndarray, s: float, c: float = 0.0) -> np.ndarray:
    """Gaussian weight exp(-pi |x - c|^2 / s^2), elementwise."""
    d = np.asarray(x, dtype=np.float64) - c
    return np.exp(-math.pi * d * d / (s * s))


def support(s: float, c: float, tail_cut: int = DEFAULT_TAIL_CUT) -> Tuple[int, int]:
    """Integer endpoints of [c - t s, c + t s]."""
    return int(math.ceil(c - tail_cut * s)), int(math.floor(c + tail_cut * s))


def truncated_probabilities(
    s: float, c: float = 0.0, tail_cut: int = DEFAULT_TAIL_CUT
) -> Tuple[np.ndarray, np.ndarray]:
    """Exact probability table of the tail-cut 1-D discrete Gaussian."""
    lo, hi = support(s, c, tail_cut)
    xs = np.arange(lo, hi + 1, dtype=np.int64)
    w = rho(xs, s, c)
    return xs, w / w.sum()


def sample_z(
    s: float,
    c: float,
    rng: np.random.Generator,
    tail_cut: int = DEFAULT_TAIL_CUT,
) -> int:
    """z proportional to rho_{s,c}(z) on [c - t s, c + t s], by rejection from uniform."""
    if s <= 0:
        raise ValueError(f"width must be positive, got {s}")
    lo, hi = support(s, c, tail_cut)
    if lo > hi:
        raise SamplerStuck(f"empty support for s={s}, c={c}")
    if lo == hi:
        return lo
    scale = -math.pi / (s * s)
    tried = 0
    while tried < SAMPLER_RETRY_CAP:
        cand = rng.integers(lo, hi + 1, size=SAMPLER_BATCH)
        u = rng.random(SAMPLER_BATCH)
        d = cand - c
        accepted = np.nonzero(u < np.exp(scale * d * d))[0]
        if accepted.size:
            return int(cand[accepted[0]])
        tried += SAMPLER_BATCH
    raise SamplerStuck(f"no acceptance after {tried} candidates (s={s}, c={c})")


@dataclass(frozen=True)
class DiscreteGaussian:
    """The tail-cut 1-D discrete Gaussian D_{Z, s, c} as an explicit table."""
    s: float
    c: float = 0.0
    tail_cut: int = DEFAULT_TAIL_CUT

    @property
    def table(self) -> Tuple[np.ndarray, np.ndarray]:
        return truncated_probabilities(self.s, self.c, self.tail_cut)

    def probability(self, z: int) -> float:
        xs, ps = self.table
        hit = np.nonzero(xs == z)[0]
        return float(ps[hit[0]]) if hit.size else 0.0

    def sample(self, rng: np.random.Generator) -> int:
        return sample_z(self.s, self.c, rng, self.tail_cut)


def sample_dom(
    n: int,
    s: float,
    rng: np.random.Generator,
    tail_cut: int = DEFAULT_TAIL_CUT,
) -> np.ndarray:
    """n independent draws of sample_z(s, 0): a sample close to D_{Z^n, s}."""
    if s < math.sqrt(math.log2(max(n, 2))):
        logger.warning("sample_dom width %.4f is below sqrt(log2 n)=%.4f", s, math.sqrt(math.log2(max(n, 2))))
    return np.array([sample_z(s, 0.0, rng, tail_cut) for _ in range(n)], dtype=np.int64)


def _check_width(s: float, gs: GramSchmidt, dim: int) -> None:
    need = gs.max_norm * math.sqrt(math.log2(max(dim, 2)))
    if s < need:
        logger.warning("sampling width %.4f below ||T~|| * sqrt(log2 n) = %.4f", s, need)


def nearest_plane(
    T: np.ndarray,
    gs: GramSchmidt,
    s: float,
    center: np.ndarray,
    rng: np.random.Generator,
    tail_cut: int = DEFAULT_TAIL_CUT,
) -> np.ndarray:
    """Randomized nearest-plane walk: a lattice vector of L(T) close to D_{L(T), s, center}.

    Columns are visited in reverse order; step i draws from D_{Z, s/||t~_i||, c_i}
    with c_i the projection coefficient of the current center on t~_i.
    """
    T = np.asarray(T, dtype=np.int64)
    rows = T.T.copy()
    gs_rows = gs.vectors.T.copy()
    inv_sq = 1.0 / (gs.norms * gs.norms)
    c = np.array(center, dtype=np.float64, copy=True)
    v = np.zeros(T.shape[0], dtype=np.int64)
    for i in range(T.shape[1] - 1, -1, -1):
        ci = float(c @ gs_rows[i]) * inv_sq[i]
        z = sample_z(s / gs.norms[i], ci, rng, tail_cut)
        if z:
            c -= z * rows[i]
            v += z * rows[i]
    return v


def sample_pre(
    A: np.ndarray,
    T: np.ndarray,
    u: np.ndarray,
    s: float,
    rng: np.random.Generator,
    q: int,
    tail_cut: int = DEFAULT_TAIL_CUT,
    gs: Optional[GramSchmidt] = None,
) -> np.ndarray:
    """x in the coset {x : A x = u mod q}, distributed close to D_{coset, s}.

    Samples v from the kernel lattice centred at -t for a particular solution t
    and returns t + v.
    """
    if gs is None:
        gs = gram_schmidt(T)
    _check_width(s, gs, T.shape[0])
    t = solve_particular(A, u, q)
    v = nearest_plane(T, gs, s, -t.astype(np.float64), rng, tail_cut)
    return t + v


def sample_gaussian(
    A: np.ndarray,
    T: np.ndarray,
    s: float,
    c: np.ndarray,
    rng: np.random.Generator,
    q: int,
    tail_cut: int = DEFAULT_TAIL_CUT,
    gs: Optional[GramSchmidt] = None,
) -> np.ndarray:
    """x in the kernel lattice of A, distributed close to D_{lattice, s, c}."""
    c = np.asarray(c, dtype=np.float64).reshape(-1)
    if c.shape[0] != T.shape[0]:
        raise LengthMismatch(f"center has length {c.shape[0]}, lattice dimension is {T.shape[0]}")
    if gs is None:
        gs = gram_schmidt(T)
    _check_width(s, gs, T.shape[0])
    return nearest_plane(T, gs, s, c, rng, tail_cut)


def enumerate_coset_distribution(
    A: np.ndarray,
    u: np.ndarray,
    q: int,
    s: float,
    radius: float,
    center: Optional[np.ndarray] = None,
) -> Dict[Tuple[int, ...], float]:
    """Exact D_{coset, s, center} restricted to a ball, by brute-force enumeration.

    Only meant for tiny dimensions (it walks the whole bounding box).
    """
    A = np.asarray(A, dtype=np.int64)
    u = mat_mod_q(np.asarray(u).reshape(-1), q)
    dim = A.shape[1]
    c = np.zeros(dim) if center is None else np.asarray(center, dtype=np.float64)
    r = int(math.ceil(radius))
    weights: Dict[Tuple[int, ...], float] = {}
    for point in itertools.product(range(-r, r + 1), repeat=dim):
        x = np.array(point, dtype=np.int64)
        d = x - c
        if float(d @ d) > radius * radius:
            continue
        if np.any(mat_mod_q(A @ x, q) != u):
            continue
        weights[point] = math.exp(-math.pi * float(d @ d) / (s * s))
    total = sum(weights.values())
    return {p: w / total for p, w in weights.items()}

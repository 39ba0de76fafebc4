"""Context hiding: combined signatures on two data sets with the same functional output."""
import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .analysis_engine import bin_values, statistical_distance
from .config import PRIVACY_BIN_FRACTION, PRIVACY_MAX_BIN
from .errors import EmptySamples, FunctionalMismatch
from .lsh_scheme import combine, lsh_sign, random_tag, setup
from .message_encode import apply_functional
from .types import DistanceReport, LinearFunctional, Message, Params, PublicKey, SecretKey

logger = logging.getLogger(__name__)


def check_equal_outputs(
    v0: Sequence[bytes], v1: Sequence[bytes], functionals: Sequence[LinearFunctional]
) -> None:
    if len(v0) != len(v1):
        raise FunctionalMismatch(f"data sets of sizes {len(v0)} and {len(v1)}")
    m0 = [Message.of(s) for s in v0]
    m1 = [Message.of(s) for s in v1]
    for i, f in enumerate(functionals):
        if len(f) != len(v0):
            raise FunctionalMismatch(f"functional {i} has {len(f)} coefficients for {len(v0)} symbols")
        if apply_functional(f, m0) != apply_functional(f, m1):
            raise FunctionalMismatch(f"functional {i} gives different messages on the two data sets")


def run_privacy_experiment(
    params: Params,
    v0: Sequence[bytes],
    v1: Sequence[bytes],
    functionals: Sequence[LinearFunctional],
    samples: int,
    rng: np.random.Generator,
    keys: Optional[Tuple[PublicKey, SecretKey]] = None,
    bin_width: Optional[float] = None,
    max_bin: int = PRIVACY_MAX_BIN,
) -> DistanceReport:
    """Per functional, the distance between binned first coordinates of each combined column.

    For b in {0, 1}, samples times: fresh tag, sign every symbol of V_b, combine per
    functional. keys=(pk, sk) reuses an existing key pair.
    """
    check_equal_outputs(v0, v1, functionals)
    if samples < 1:
        raise EmptySamples("the privacy experiment needs at least one sample")
    pk, sk = keys if keys is not None else setup(params, rng)
    width = bin_width if bin_width is not None else PRIVACY_BIN_FRACTION * params.V

    # projections[b][f][column] -> bins over samples
    projections: List[List[List[List[int]]]] = [[[] for _ in functionals] for _ in range(2)]
    for b, data_set in enumerate((v0, v1)):
        first: List[List[List[float]]] = [[] for _ in functionals]
        for _ in range(samples):
            tag = random_tag(params.n, rng)
            sigmas = [lsh_sign(sk, pk, tag, Message.of(s), rng, single_symbol_only=True) for s in data_set]
            for fi, f in enumerate(functionals):
                combined = combine(pk, tag, list(zip(f.coefficients, sigmas)), f.p)
                first[fi].append([float(c) for c in combined.matrix[0, :]])
        for fi in range(len(functionals)):
            columns = np.asarray(first[fi], dtype=np.float64)
            projections[b][fi] = [bin_values(columns[:, c], width, max_bin) for c in range(columns.shape[1])]

    column_distances = [
        [statistical_distance(x, y) for x, y in zip(projections[0][fi], projections[1][fi])]
        for fi in range(len(functionals))
    ]
    report = DistanceReport(samples=samples, bin_width=width, column_distances=column_distances)
    logger.info("privacy experiment over %d samples: distances %s", samples, ["%.4f" % d for d in report.distances])
    return report

import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from src.params import derive_params, load_preset
from src.sh_scheme import gen
from src.trapdoor import trap_gen
from src.types import SecretKey


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def micro_params():
    # n=16, q=5: h=1, a 3-wide gadget and a 13-column A_bar
    return derive_params(16, 1, 5)


@pytest.fixture(scope="session")
def mini_params():
    return load_preset("mini")


@pytest.fixture(scope="session")
def micro_trapdoor(micro_params):
    return trap_gen(micro_params, np.random.default_rng(7))


@pytest.fixture(scope="session")
def mini_keys(mini_params):
    return gen(mini_params, np.random.default_rng(11))


@pytest.fixture(scope="session")
def mini_trapdoor(mini_params):
    A, T = trap_gen(mini_params, np.random.default_rng(13))
    return A, SecretKey(T=T)

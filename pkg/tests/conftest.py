import os
import random

import numpy as np
import pytest

from smithbar.core.config import reset_config

SAMPLES_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), 'samples')

TORSION = "gen x 0 0\ngen y 1 1\ngen z 2 2\nbnd z 2 y\n"


def sample_path(name):
    return os.path.join(SAMPLES_DIR, name)


@pytest.fixture(autouse=True)
def clean_config(monkeypatch):
    """Every test starts from the built-in defaults."""
    for var in ('SB_TOL', 'SB_RESIDUAL_TOL', 'SB_N0', 'SB_GRID', 'SB_SEED'):
        monkeypatch.delenv(var, raising=False)
    reset_config()
    yield
    reset_config()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def py_rng():
    return random.Random(7)


@pytest.fixture
def samples():
    return sample_path

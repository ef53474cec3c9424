import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import settings

sys.path.insert(0, str(Path(__file__).parent))

from krawpoly.rotations import random_rotation  # noqa: E402

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def generic_R(rng):
    return random_rotation(3, rng, min_abs=0.1)

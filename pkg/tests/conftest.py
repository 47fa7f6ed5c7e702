import math

import numpy as np
import pytest

from complementarity.qstate import make_pure, to_density
from complementarity.sampling import SeededSource

R2 = 1.0 / math.sqrt(2.0)


@pytest.fixture
def src():
    return SeededSource(20240611)


@pytest.fixture
def bell_state():
    return make_pure([1, 0, 0, 1])


@pytest.fixture
def bell_rho(bell_state):
    return to_density(bell_state)


@pytest.fixture
def product00():
    return make_pure([1, 0, 0, 0])


@pytest.fixture
def schmidt08():
    # sqrt(0.8)|00> + sqrt(0.2)|11>
    return make_pure([math.sqrt(0.8), 0, 0, math.sqrt(0.2)])


def werner_oracle(p):
    """Werner matrix written out entry by entry."""
    rho = np.zeros((4, 4))
    for i in range(4):
        rho[i, i] = (1 - p) / 4
    for i in (0, 3):
        for j in (0, 3):
            rho[i, j] += p / 2
    return rho

import numpy as np
import pytest
from hypothesis import settings

from helpers import basis_vector, span_projection

settings.register_profile("grasswig", deadline=None, max_examples=40)
settings.load_profile("grasswig")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def e4():
    return [basis_vector(4, j) for j in range(4)]


@pytest.fixture
def nonorth_pair_4(e4):
    """d=4, n=2: im P = span{e1,e2}, im Q = span{e1,(e2+e3)/sqrt2}; angles (pi/4, 0)."""
    P = span_projection(e4[0], e4[1])
    Q = span_projection(e4[0], (e4[1] + e4[2]) / np.sqrt(2))
    return P, Q


@pytest.fixture
def orth_pair_4(e4):
    P = span_projection(e4[0], e4[1])
    Q = span_projection(e4[0], e4[2])
    return P, Q

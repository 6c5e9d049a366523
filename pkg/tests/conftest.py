import numpy as np
import pytest

from bilevel import data_io
from bilevel.gauges import EuclideanBall, UnitBox


@pytest.fixture(scope="session")
def eil76():
    return data_io.eil76()


@pytest.fixture(params=["l2", "l1"])
def gauge_name(request):
    return request.param


def gauge_for(name, n):
    return EuclideanBall(n) if name == "l2" else UnitBox(n)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)

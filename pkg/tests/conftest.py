import numpy as np
import pytest
from fastapi.testclient import TestClient

from app.core.config import get_settings
from app.services.dicke.combinatorics import DickeSpec


def all_specs(s2_values, n_values):
    """Every (s2, n, k) with 0 <= k <= s2*n."""
    return [
        DickeSpec(s2, n, k)
        for s2 in s2_values
        for n in n_values
        for k in range(s2 * n + 1)
    ]


@pytest.fixture
def settings():
    return get_settings()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="module")
def client():
    from app.main import app

    with TestClient(app) as c:
        yield c

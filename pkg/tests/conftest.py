import numpy as np
import pytest

from conjugate_reversibility.tolerances import ENV_TOLERANCE_SCALE


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(autouse=True)
def _no_tolerance_scale(monkeypatch):
    monkeypatch.delenv(ENV_TOLERANCE_SCALE, raising=False)

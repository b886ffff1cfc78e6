"""Shared test configuration.

The eigensolver is numba-compiled on first use; warming it once per session
keeps individual test timings meaningful and stops hypothesis from flagging
the first property example as slow.
"""

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from syncmargin.spectral import symmetric_eigen

settings.register_profile(
    "suite",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("suite")


@pytest.fixture(scope="session", autouse=True)
def _warm_eigensolver():
    symmetric_eigen(np.array([[2.0, -1.0, -1.0], [-1.0, 2.0, -1.0], [-1.0, -1.0, 2.0]]))

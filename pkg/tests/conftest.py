"""Shared fixtures and hypothesis strategies."""

import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
import hypothesis.strategies as st

settings.register_profile(
    "default",
    deadline=None,
    max_examples=50,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.register_profile("ci", settings.get_profile("default"), max_examples=200)
settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def iwasawa_params(t_bound=2.0, u_bound=2.0):
    """Strategy for (t, u, theta) triples at desk scale."""
    return st.tuples(
        st.floats(-t_bound, t_bound),
        st.floats(-u_bound, u_bound),
        st.floats(0.0, 2.0 * np.pi, exclude_max=True),
    )

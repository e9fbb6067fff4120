import numpy as np
import pytest

from spikeflow import SimulationConfig, simulate


@pytest.fixture(scope="session")
def small_graph():
    """One deterministic remove-semantics graph reused across read-only tests."""
    return simulate(SimulationConfig(n=200, alpha=1.0, semantics="remove", seed=20260815), 0)


@pytest.fixture
def rng():
    return np.random.default_rng(11)

import numpy as np
import pytest

from gridqmc import InjectionDistribution, Line, Network, builtin_config_path, load_config

FORECAST_PROBS = [0.08, 0.43, 0.42, 0.07]


@pytest.fixture
def three_bus_ring() -> Network:
    """Ring of three buses with equal susceptances, slack at bus 3."""
    return Network(
        bus_ids=(1, 2, 3),
        slack_bus=3,
        lines=(
            Line(1, 2, susceptance=1.0, rating_mw=2.0),
            Line(1, 3, susceptance=1.0, rating_mw=2.0),
            Line(2, 3, susceptance=1.0, rating_mw=2.0),
        ),
    )


@pytest.fixture
def forecast_dist() -> InjectionDistribution:
    """Four-bin generator forecast used throughout the examples."""
    return InjectionDistribution(bus=1, values_mw=[0, 1, 2, 3], probabilities=FORECAST_PROBS)


@pytest.fixture
def three_bus_config():
    return load_config(builtin_config_path("three_bus"))


@pytest.fixture
def five_bus_config():
    return load_config(builtin_config_path("five_bus"))


def random_distribution(rng: np.random.Generator, bus: int, n_bins: int = 4) -> InjectionDistribution:
    """Random strictly-increasing MW levels with Dirichlet probabilities."""
    probs = rng.dirichlet(np.ones(n_bins))
    values = np.sort(rng.uniform(-3.0, 3.0, n_bins))
    while np.any(np.diff(values) <= 0):
        values = np.sort(rng.uniform(-3.0, 3.0, n_bins))
    return InjectionDistribution(bus=bus, values_mw=values, probabilities=probs)

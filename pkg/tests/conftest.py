import numpy as np
import pytest

from pulsegram import Event, Polarity, SensorGeometry, build_stream


@pytest.fixture
def geometry():
    return SensorGeometry(1280, 720)


@pytest.fixture
def sample_events():
    """The worked three-activation example of a single pixel."""
    return [Event(235034, 346, 142, Polarity.OFF),
            Event(237174, 346, 142, Polarity.ON),
            Event(238514, 346, 142, Polarity.OFF)]


@pytest.fixture
def sample_stream(sample_events, geometry):
    return build_stream(sample_events, geometry)


def random_events(rng: np.random.Generator, n: int, geometry: SensorGeometry,
                  t_max: int = 15_000_000):
    return [Event(int(t), int(x), int(y), Polarity(int(p)))
            for t, x, y, p in zip(rng.integers(0, t_max, n),
                                  rng.integers(0, geometry.width, n),
                                  rng.integers(0, geometry.height, n),
                                  rng.integers(0, 2, n))]

"""Shared fixtures for the latfilter tests."""

import numpy as np
import pytest


@pytest.fixture
def rng():
    """Seeded generator so every randomized test is reproducible."""
    return np.random.default_rng(20240611)


@pytest.fixture
def random_image(rng):
    """Factory for random images on the 0-255 scale."""

    def make(height: int, width: int) -> np.ndarray:
        return rng.uniform(0.0, 255.0, size=(height, width))

    return make

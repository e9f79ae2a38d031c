"""Contains fixtures for tests for the lhaf_utils module."""

import numpy as np
import pytest

from heraldsim.lhaf_utils.lhaf_engine import LoopMatrixSpec


@pytest.fixture(scope="module")
def rng() -> np.random.Generator:
    """
    rng returns a seeded random generator.

    Returns
    -------
    np.random.Generator
        generator with a fixed seed so the random specs are reproducible
    """
    return np.random.default_rng(20190415)


def _unit_disc(rng: np.random.Generator, shape) -> np.ndarray:
    radius = np.sqrt(rng.uniform(size=shape))
    angle = rng.uniform(0.0, 2.0 * np.pi, size=shape)
    return radius * np.exp(1j * angle)


@pytest.fixture(scope="module")
def random_spec(rng):
    """
    random_spec returns a factory of random loop matrix specs.

    Entries of the base matrix and the loops are uniform in the unit disc.
    """

    def _make(num_indices: int, max_total: int) -> LoopMatrixSpec:
        base = _unit_disc(rng, (num_indices, num_indices))
        base = 0.5 * (base + base.T)
        loops = _unit_disc(rng, num_indices)
        reps = np.zeros(num_indices, dtype=int)
        total = int(rng.integers(0, max_total + 1))
        for index in rng.integers(0, num_indices, size=total):
            reps[index] += 1
        return LoopMatrixSpec(base, loops, reps)

    return _make


@pytest.fixture(scope="module")
def two_by_two() -> np.ndarray:
    """two_by_two returns [[d1, a], [a, d2]] with d1 = 0.3 - 0.2i, d2 = 1.1, a = 0.7i."""
    return np.array([[0.3 - 0.2j, 0.7j], [0.7j, 1.1]])


@pytest.fixture(scope="module")
def timing_pattern():
    """
    timing_pattern returns (n, m) of the three-mode timing example.

    The detected modes see one and two photons and the heralded mode is
    resolved up to 20 photons.
    """
    return (1, 2, 20), (1, 2, 20)

"""Contains fixtures for tests for the state_utils module."""

import pytest

from heraldsim.state_utils import gaussian_core


@pytest.fixture(scope="module")
def prepared_state() -> gaussian_core.GaussianState:
    """
    prepared_state returns a generic three-mode state.

    Every kind of Gaussian unitary acts on it at least once, so its covariance
    has nonzero entries in all blocks.
    """
    state = gaussian_core.vacuum(3)
    state = gaussian_core.squeeze(state, 1, 0.6 * (0.8 + 0.6j))
    state = gaussian_core.two_mode_squeeze(state, 2, 3, 0.4 - 0.2j)
    state = gaussian_core.displace(state, 2, 0.3 - 0.5j)
    state = gaussian_core.beamsplitter(state, 1, 2, 0.7, 0.3)
    state = gaussian_core.beamsplitter(state, 3, 1, -0.4, 1.1)
    return state


@pytest.fixture(scope="module")
def lossy_state(prepared_state) -> gaussian_core.GaussianState:
    """lossy_state returns ``prepared_state`` with loss on modes 1 and 3."""
    state = gaussian_core.loss(prepared_state, 1, 0.7)
    return gaussian_core.loss(state, 3, 0.55)

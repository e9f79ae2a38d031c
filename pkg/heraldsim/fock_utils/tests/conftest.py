"""Contains fixtures for tests for the fock_utils module."""

import pytest

from heraldsim.state_utils import gaussian_core


@pytest.fixture(scope="module")
def tmsv():
    """
    tmsv returns a factory of lossy two-mode squeezed vacua.

    Mode 1 passes through loss eta1 and mode 2 through loss eta2.
    """

    def _make(zeta: complex, eta1: float = 1.0, eta2: float = 1.0):
        state = gaussian_core.two_mode_squeeze(gaussian_core.vacuum(2), 1, 2, zeta)
        state = gaussian_core.loss(state, 1, eta1)
        return gaussian_core.loss(state, 2, eta2)

    return _make


@pytest.fixture(scope="module")
def displaced_lossy_state() -> gaussian_core.GaussianState:
    """
    displaced_lossy_state returns a mixed two-mode state with nonzero means.

    Its heralded matrix has complex off-diagonal entries.
    """
    state = gaussian_core.vacuum(2)
    state = gaussian_core.squeeze(state, 1, 0.5 * (0.6 + 0.8j))
    state = gaussian_core.displace(state, 1, 0.3 + 0.2j)
    state = gaussian_core.squeeze(state, 2, -0.3)
    state = gaussian_core.beamsplitter(state, 1, 2, 0.6, 0.4)
    state = gaussian_core.loss(state, 1, 0.8)
    return gaussian_core.loss(state, 2, 0.9)

"""
Tests for the gaussian_core module.

The tests are run using pytest. To run the tests, use the following command from the
root directory of the project:

    pytest heraldsim/state_utils/tests/test_gaussian_core.py

"""

import numpy as np
import pytest

from heraldsim.exceptions import InvalidParameterException, UnphysicalStateException
from heraldsim.state_utils import gaussian_core


def test_vacuum():
    """The vacuum has zero means, covariance I/2 and trivial husk quantities."""
    state = gaussian_core.vacuum(2)
    np.testing.assert_allclose(state.means, np.zeros(4))
    np.testing.assert_allclose(state.cov, 0.5 * np.eye(4))
    gaussian_core.validate_state(state)

    husk = gaussian_core.husk(state)
    np.testing.assert_allclose(husk.a_mat, np.zeros((4, 4)), atol=1e-15)
    np.testing.assert_allclose(husk.gamma, np.zeros(4), atol=1e-15)
    assert husk.log_prefactor_core == pytest.approx(0.0, abs=1e-15)


def test_vacuum_needs_a_mode():
    """At least one mode is required."""
    with pytest.raises(InvalidParameterException):
        gaussian_core.vacuum(0)


def test_state_is_immutable(prepared_state):
    """The arrays of a state are read-only."""
    with pytest.raises(ValueError):
        prepared_state.cov[0, 0] = 1.0


def test_operations_keep_states_valid(prepared_state, lossy_state):
    """Every operation maps a valid state to a valid state."""
    gaussian_core.validate_state(prepared_state)
    gaussian_core.validate_state(lossy_state)


def test_squeeze_photon_number():
    """Squeezed vacuum holds sinh^2(r) photons."""
    state = gaussian_core.squeeze(gaussian_core.vacuum(1), 1, 0.8 * np.exp(0.4j))
    assert gaussian_core.mean_photon_number(state, 1) == pytest.approx(
        np.sinh(0.8) ** 2, rel=1e-12
    )


def test_two_mode_squeeze_marginal_is_thermal():
    """Each mode of a two-mode squeezed vacuum is thermal with sinh^2(r) photons."""
    r = 0.5
    state = gaussian_core.two_mode_squeeze(gaussian_core.vacuum(2), 1, 2, r)
    marginal = gaussian_core.reduce(state, [2])
    expected = gaussian_core.thermal(np.sinh(r) ** 2)
    np.testing.assert_allclose(marginal.cov, expected.cov, atol=1e-12)
    assert gaussian_core.purity(state) == pytest.approx(1.0, rel=1e-10)


def test_beamsplitter_preserves_photon_number(prepared_state):
    """Passive operations preserve the total mean photon number."""
    before = gaussian_core.total_mean_photon_number(prepared_state)
    after = gaussian_core.total_mean_photon_number(
        gaussian_core.beamsplitter(prepared_state, 2, 3, 1.3, -0.8)
    )
    assert after == pytest.approx(before, abs=1e-12)


def test_unitaries_preserve_symplectic_spectrum(lossy_state):
    """Gaussian unitaries leave the symplectic eigenvalues unchanged."""
    before = gaussian_core.symplectic_eigenvalues(lossy_state)
    state = gaussian_core.squeeze(lossy_state, 2, 0.3 + 0.1j)
    state = gaussian_core.beamsplitter(state, 1, 3, 0.9, 0.2)
    state = gaussian_core.two_mode_squeeze(state, 1, 2, 0.25j)
    state = gaussian_core.displace(state, 3, 1.0)
    np.testing.assert_allclose(gaussian_core.symplectic_eigenvalues(state), before, atol=1e-10)


def test_pure_state_symplectic_eigenvalues(prepared_state):
    """Pure states have every symplectic eigenvalue equal to 1/2."""
    np.testing.assert_allclose(
        gaussian_core.symplectic_eigenvalues(prepared_state), 0.5, atol=1e-10
    )
    assert gaussian_core.purity(prepared_state) == pytest.approx(1.0, rel=1e-9)


def test_thermal_purity():
    """A thermal state with n photons has purity 1 / (2n + 1)."""
    assert gaussian_core.purity(gaussian_core.thermal(0.8)) == pytest.approx(1 / 2.6)


def test_loss_scales_coherent_amplitude():
    """A coherent state stays coherent with amplitude sqrt(eta) alpha."""
    alpha = 0.7 + 0.2j
    state = gaussian_core.loss(gaussian_core.coherent(alpha), 1, 0.36)
    np.testing.assert_allclose(state.means, [0.6 * alpha, 0.6 * np.conj(alpha)])
    np.testing.assert_allclose(state.cov, 0.5 * np.eye(2), atol=1e-15)


def test_losses_compose(prepared_state):
    """Two losses on one mode act as a single loss with the product transmission."""
    twice = gaussian_core.loss(gaussian_core.loss(prepared_state, 2, 0.8), 2, 0.6)
    once = gaussian_core.loss(prepared_state, 2, 0.48)
    np.testing.assert_allclose(twice.means, once.means, atol=1e-14)
    np.testing.assert_allclose(twice.cov, once.cov, atol=1e-14)


def test_displacement_inverse(lossy_state):
    """D(alpha) followed by D(-alpha) restores the state."""
    alpha = 0.45 - 0.8j
    state = gaussian_core.displace(gaussian_core.displace(lossy_state, 3, alpha), 3, -alpha)
    np.testing.assert_allclose(state.means, lossy_state.means, atol=1e-15)
    np.testing.assert_array_equal(state.cov, lossy_state.cov)


def test_full_loss_gives_vacuum(prepared_state):
    """eta = 0 replaces the mode with vacuum."""
    state = gaussian_core.loss(prepared_state, 2, 0.0)
    marginal = gaussian_core.reduce(state, [2])
    np.testing.assert_allclose(marginal.cov, 0.5 * np.eye(2), atol=1e-15)
    np.testing.assert_allclose(marginal.means, 0.0)


@pytest.mark.parametrize("eta", [-0.1, 1.2])
def test_loss_rejects_bad_transmission(eta):
    """Transmission outside [0, 1] is an error."""
    with pytest.raises(InvalidParameterException):
        gaussian_core.loss(gaussian_core.vacuum(1), 1, eta)


def test_mode_out_of_range():
    """Mode numbers are 1-based and bounded by the number of modes."""
    with pytest.raises(InvalidParameterException):
        gaussian_core.squeeze(gaussian_core.vacuum(2), 3, 0.1)
    with pytest.raises(InvalidParameterException):
        gaussian_core.beamsplitter(gaussian_core.vacuum(2), 1, 1, 0.1, 0.0)


def test_validate_rejects_non_hermitian():
    """A non-Hermitian covariance is unphysical."""
    cov = 0.5 * np.eye(2, dtype=complex)
    cov[0, 1] = 0.2
    with pytest.raises(UnphysicalStateException):
        gaussian_core.validate_state(gaussian_core.GaussianState(1, np.zeros(2), cov))


def test_husk_rejects_singular_sigma_q():
    """sigma + I/2 = 0 cannot be inverted."""
    state = gaussian_core.GaussianState(1, np.zeros(2), -0.5 * np.eye(2))
    with pytest.raises(UnphysicalStateException):
        gaussian_core.husk(state)


def test_husk_a_mat_is_symmetric(lossy_state):
    """A is symmetric and gamma pairs with the means."""
    husk = gaussian_core.husk(lossy_state)
    np.testing.assert_allclose(husk.a_mat, husk.a_mat.T, atol=1e-14)
    sigma_q_inv = np.linalg.inv(husk.sigma_q)
    np.testing.assert_allclose(husk.gamma, lossy_state.means.conj() @ sigma_q_inv)


def test_reduce_and_permute(prepared_state):
    """reduce keeps modes in order and permute_modes reorders them."""
    reduced = gaussian_core.reduce(prepared_state, [3, 1])
    assert reduced.num_modes == 2
    assert reduced.cov[0, 0] == prepared_state.cov[0, 0]
    assert reduced.cov[1, 1] == prepared_state.cov[2, 2]

    permuted = gaussian_core.permute_modes(prepared_state, [3, 1, 2])
    assert permuted.means[0] == prepared_state.means[2]
    assert permuted.means[3] == prepared_state.means[5]
    assert gaussian_core.mean_photon_number(permuted, 1) == pytest.approx(
        gaussian_core.mean_photon_number(prepared_state, 3)
    )


def test_reduce_rejects_empty(prepared_state):
    """Tracing out every mode is an error."""
    with pytest.raises(InvalidParameterException):
        gaussian_core.reduce(prepared_state, [])


def test_permute_rejects_non_permutation(prepared_state):
    """The order must list every mode once."""
    with pytest.raises(InvalidParameterException):
        gaussian_core.permute_modes(prepared_state, [1, 1, 2])


def test_husk_a_mat_inverts_sigma_q(lossy_state):
    """X A = I - sigma_Q^-1 with X swapping the annihilation and creation blocks."""
    husk = gaussian_core.husk(lossy_state)
    ell = lossy_state.num_modes
    swap = np.block(
        [[np.zeros((ell, ell)), np.eye(ell)], [np.eye(ell), np.zeros((ell, ell))]]
    )
    np.testing.assert_allclose(
        swap @ husk.a_mat, np.eye(2 * ell) - np.linalg.inv(husk.sigma_q), atol=1e-12
    )

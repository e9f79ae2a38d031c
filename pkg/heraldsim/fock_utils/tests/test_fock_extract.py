"""
Tests for the fock_extract module.

The tests are run using pytest. To run the tests, use the following command from the
root directory of the project:

    pytest heraldsim/fock_utils/tests/test_fock_extract.py

"""

import math

import numpy as np
import pytest
import scipy.linalg as la

from heraldsim.exceptions import (
    ConvergenceException,
    InvalidParameterException,
    ZeroProbabilityException,
)
from heraldsim.fock_utils import fock_extract
from heraldsim.state_utils import gaussian_core


def _annihilation(cutoff: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, cutoff)), k=1).astype(complex)


def _squeeze_unitary(a: np.ndarray, z: complex) -> np.ndarray:
    return la.expm(0.5 * (np.conj(z) * a @ a - z * a.conj().T @ a.conj().T))


def _displace_unitary(a: np.ndarray, alpha: complex) -> np.ndarray:
    return la.expm(alpha * a.conj().T - np.conj(alpha) * a)


def _beamsplitter_unitary(a1: np.ndarray, a2: np.ndarray, theta: float, phi: float) -> np.ndarray:
    return la.expm(
        theta * (np.exp(1j * phi) * a1 @ a2.conj().T - np.exp(-1j * phi) * a1.conj().T @ a2)
    )


def test_vacuum_element():
    """<0|vacuum|0> = 1."""
    assert fock_extract.fock_element(gaussian_core.vacuum(1), [0], [0]) == pytest.approx(1.0)


def test_coherent_elements():
    """Coherent state elements match e^{-|a|^2} a^m conj(a)^n / sqrt(m! n!)."""
    alpha = 0.7 + 0.2j
    state = gaussian_core.coherent(alpha)
    husk = gaussian_core.husk(state)
    for m in range(7):
        for n in range(7):
            expected = (
                np.exp(-abs(alpha) ** 2)
                * alpha**m
                * np.conj(alpha) ** n
                / math.sqrt(math.factorial(m) * math.factorial(n))
            )
            np.testing.assert_allclose(
                fock_extract.fock_element(state, [m], [n], husk), expected, rtol=1e-10
            )


def test_thermal_elements():
    """A thermal state is diagonal with geometric photon statistics."""
    nbar = 0.8
    state = gaussian_core.thermal(nbar)
    for n in range(11):
        expected = nbar**n / (1 + nbar) ** (n + 1)
        assert fock_extract.fock_element(state, [n], [n]) == pytest.approx(expected, rel=1e-10)
    assert abs(fock_extract.fock_element(state, [2], [3])) < 1e-15


def test_squeezed_vacuum_elements():
    """Squeezed vacuum amplitudes follow (-e^{i theta} tanh r)^k sqrt((2k)!) / (2^k k!)."""
    r, theta = 0.6, 0.9
    state = gaussian_core.squeeze(gaussian_core.vacuum(1), 1, r * np.exp(1j * theta))
    amplitudes = np.zeros(9, dtype=complex)
    for k in range(5):
        amplitudes[2 * k] = (
            (-np.exp(1j * theta) * np.tanh(r)) ** k
            * math.sqrt(math.factorial(2 * k))
            / (2**k * math.factorial(k))
            / math.sqrt(np.cosh(r))
        )
    for m in range(9):
        for n in range(9):
            expected = amplitudes[m] * np.conj(amplitudes[n])
            np.testing.assert_allclose(
                fock_extract.fock_element(state, [m], [n]), expected, rtol=1e-10, atol=1e-14
            )


def test_tmsv_elements(tmsv):
    """Two-mode squeezed vacuum amplitudes are sech(r) (-e^{i theta} tanh r)^n on |n, n>."""
    r, theta = 0.5, 0.3
    state = tmsv(r * np.exp(1j * theta))
    ratio = -np.exp(1j * theta) * np.tanh(r)
    for n in range(9):
        expected = np.tanh(r) ** (2 * n) / np.cosh(r) ** 2
        assert fock_extract.fock_element(state, [n, n], [n, n]) == pytest.approx(
            expected, rel=1e-10
        )
    expected = ratio**2 * np.conj(ratio) ** 1 / np.cosh(r) ** 2
    np.testing.assert_allclose(
        fock_extract.fock_element(state, [2, 2], [1, 1]), expected, rtol=1e-10
    )


def test_fock_element_rejects_bad_lengths():
    """m and n must have one entry per mode."""
    with pytest.raises(InvalidParameterException):
        fock_extract.fock_element(gaussian_core.vacuum(2), [0], [0, 0])


def test_herald_raw_vacuum():
    """Heralding vacuum on vacuum leaves the vacuum."""
    rho, p_tilde = fock_extract.herald_raw(gaussian_core.vacuum(2), [0], 3)
    np.testing.assert_allclose(rho.entries, np.diag([1.0, 0.0, 0.0]), atol=1e-15)
    assert p_tilde == pytest.approx(1.0)


@pytest.mark.parametrize("m", [0, 1, 2, 3])
def test_herald_raw_tmsv(tmsv, m):
    """A heralded two-mode squeezed vacuum is the Fock state |m>."""
    r = 0.8
    rho, p_tilde = fock_extract.herald_raw(tmsv(r), [m], m + 4)
    nbar = np.sinh(r) ** 2
    assert p_tilde == pytest.approx(nbar**m / (1 + nbar) ** (m + 1), rel=1e-10)
    expected = np.zeros((m + 4, m + 4))
    expected[m, m] = p_tilde
    np.testing.assert_allclose(rho.entries, expected, atol=1e-12)


def test_herald_probability_lossless_values(tmsv):
    """Heralded Fock states from zeta = 1 appear with p = 0.243 and 0.082."""
    assert fock_extract.herald_probability_exact(tmsv(1.0), [1]) == pytest.approx(
        0.243, abs=1e-3
    )
    assert fock_extract.herald_probability_exact(tmsv(1.0), [3]) == pytest.approx(
        0.082, abs=1e-3
    )


def test_herald_probability_vacuum():
    """The vacuum pattern on vacuum is certain."""
    state = gaussian_core.vacuum(3)
    assert fock_extract.herald_probability_exact(state, [0, 0]) == pytest.approx(1.0)


def test_herald_probability_independent_of_heralded_loss(tmsv):
    """The detection probability does not depend on the loss of the heralded mode."""
    reference = fock_extract.herald_probability_exact(tmsv(0.9, 0.7, 1.0), [2])
    for eta2 in (0.2, 0.5, 0.9):
        assert fock_extract.herald_probability_exact(tmsv(0.9, 0.7, eta2), [2]) == (
            pytest.approx(reference, abs=1e-12)
        )


def test_herald_raw_probability_approaches_exact(tmsv):
    """With a lossy source p~ approaches p from below as the cutoff grows."""
    state = tmsv(1.0, 0.8, 0.6)
    p = fock_extract.herald_probability_exact(state, [1])
    previous = 0.0
    for cutoff in (2, 4, 8, 16, 32):
        _, p_tilde = fock_extract.herald_raw(state, [1], cutoff)
        assert p_tilde >= previous - 1e-12
        assert p_tilde <= p + 1e-9
        previous = p_tilde
    assert previous == pytest.approx(p, rel=1e-6)


def test_herald_raw_hermitian_without_symmetrizing(displaced_lossy_state):
    """Entry-wise evaluation is Hermitian within tolerance."""
    rho, _ = fock_extract.herald_raw(displaced_lossy_state, [1], 6, symmetrize=False)
    assert rho.hermiticity_error() <= 1e-9
    symmetric, _ = fock_extract.herald_raw(displaced_lossy_state, [1], 6)
    assert symmetric.hermiticity_error() == 0.0
    np.testing.assert_allclose(rho.entries, symmetric.entries, atol=1e-9)


@pytest.mark.parametrize("m", [1, 2, 3])
def test_herald_adaptive_tmsv(tmsv, m):
    """The adaptive cutoff stops at m + 1 for a heralded Fock state."""
    result = fock_extract.herald_adaptive(tmsv(1.0), [m], rel_tol=1e-6)
    assert result.d_used == m + 1
    assert result.rho.entries[m, m] == pytest.approx(1.0, abs=1e-9)
    assert result.rho.is_valid()


def test_herald_adaptive_mixed_state(displaced_lossy_state):
    """The normalized heralded state is a valid density matrix."""
    result = fock_extract.herald_adaptive(displaced_lossy_state, [1], rel_tol=1e-8)
    assert result.rho.normalized
    assert result.rho.is_valid()
    p_tilde = fock_extract.herald_raw(displaced_lossy_state, [1], result.d_used)[1]
    assert abs(p_tilde - result.probability) / result.probability <= 2e-8


def test_herald_adaptive_zero_probability():
    """An odd photon number from a single squeezed vacuum never occurs."""
    state = gaussian_core.squeeze(gaussian_core.vacuum(2), 1, 0.7)
    with pytest.raises(ZeroProbabilityException):
        fock_extract.herald_adaptive(state, [1])


def test_herald_adaptive_no_convergence(tmsv):
    """A bright heralded mode cannot fit into a tiny d_max."""
    with pytest.raises(ConvergenceException) as excinfo:
        fock_extract.herald_adaptive(tmsv(1.5, 0.5, 1.0), [0], d_max=4)
    assert excinfo.value.residual > 1e-6


def test_herald_rejects_wrong_pattern_length():
    """The pattern covers every mode except the heralded one."""
    with pytest.raises(InvalidParameterException):
        fock_extract.herald_raw(gaussian_core.vacuum(3), [0], 3)
    with pytest.raises(InvalidParameterException):
        fock_extract.HeraldPattern((1, -1))


def test_pattern_probabilities_sum_to_one(displaced_lossy_state):
    """Patterns with up to 12 photons carry almost all of the probability."""
    assert gaussian_core.total_mean_photon_number(displaced_lossy_state) <= 1.0
    probabilities = fock_extract.pattern_probabilities(displaced_lossy_state, [1, 2], 12)
    assert len(probabilities) == 91
    assert all(p >= -1e-12 for p in probabilities.values())
    assert 1.0 - math.fsum(probabilities.values()) < 1e-3


def test_single_mode_density_matrix_thermal(tmsv):
    """Each mode of a two-mode squeezed vacuum is thermal."""
    r = 0.5
    rho = fock_extract.single_mode_density_matrix(tmsv(r), 2, 10)
    nbar = np.sinh(r) ** 2
    expected = np.diag([nbar**n / (1 + nbar) ** (n + 1) for n in range(10)])
    np.testing.assert_allclose(rho.entries, expected, atol=1e-12)


def test_density_matrix_helpers():
    """Padding, normalization and moments of a small density matrix."""
    rho = fock_extract.FockDensityMatrix(2, np.array([[1.0, 0.5], [0.5, 1.0]]))
    normalized = rho.normalize()
    assert normalized.trace() == pytest.approx(1.0)
    assert normalized.mean_photon_number() == pytest.approx(0.5)
    assert normalized.mean_amplitude() == pytest.approx(0.25)
    assert normalized.purity() == pytest.approx(0.625)
    padded = normalized.padded(4)
    assert padded.cutoff == 4
    assert padded.entries[3, 3] == 0
    with pytest.raises(InvalidParameterException):
        padded.padded(2)


def test_squeezed_vacuum_matches_truncated_unitary():
    """Elements of S(z)|0> agree with the matrix exponential on 60 Fock levels."""
    z = 0.5 * np.exp(0.4j)
    a = _annihilation(60)
    psi = _squeeze_unitary(a, z)[:, 0]
    state = gaussian_core.squeeze(gaussian_core.vacuum(1), 1, z)
    husk = gaussian_core.husk(state)
    assert fock_extract.fock_element(state, [2], [2], husk) == pytest.approx(
        abs(psi[2]) ** 2, rel=1e-9
    )
    for m in range(8):
        for n in range(8):
            np.testing.assert_allclose(
                fock_extract.fock_element(state, [m], [n], husk),
                psi[m] * np.conj(psi[n]),
                atol=1e-10,
            )


def test_displaced_squeezed_state_matches_truncated_unitary():
    """D(alpha) S(z)|0> agrees with the matrix exponentials on 60 Fock levels."""
    z, alpha = -0.35 + 0.2j, 0.5 - 0.3j
    a = _annihilation(60)
    psi = (_displace_unitary(a, alpha) @ _squeeze_unitary(a, z))[:, 0]
    state = gaussian_core.displace(gaussian_core.squeeze(gaussian_core.vacuum(1), 1, z), 1, alpha)
    husk = gaussian_core.husk(state)
    for m in range(6):
        for n in range(6):
            np.testing.assert_allclose(
                fock_extract.fock_element(state, [m], [n], husk),
                psi[m] * np.conj(psi[n]),
                atol=1e-10,
            )


def test_two_mode_circuit_matches_truncated_unitary():
    """A displaced mode and a squeezed mode mixed on a beamsplitter match the exponentials."""
    cutoff = 25
    a = _annihilation(cutoff)
    eye = np.eye(cutoff)
    a1, a2 = np.kron(a, eye), np.kron(eye, a)
    alpha, z, theta, phi = 0.4 + 0.25j, 0.2j, 0.7, 0.3
    prepared = np.kron(_displace_unitary(a, alpha), _squeeze_unitary(a, z))
    psi = (_beamsplitter_unitary(a1, a2, theta, phi) @ prepared)[:, 0].reshape(cutoff, cutoff)

    state = gaussian_core.squeeze(gaussian_core.vacuum(2), 2, z)
    state = gaussian_core.displace(state, 1, alpha)
    state = gaussian_core.beamsplitter(state, 1, 2, theta, phi)
    husk = gaussian_core.husk(state)
    for bra in [(0, 0), (1, 0), (0, 2), (2, 1)]:
        for ket in [(0, 0), (1, 1), (2, 0), (0, 3)]:
            np.testing.assert_allclose(
                fock_extract.fock_element(state, bra, ket, husk),
                psi[bra] * np.conj(psi[ket]),
                atol=1e-10,
            )


def test_loss_matches_traced_beamsplitter():
    """Loss eta equals a beamsplitter onto a vacuum mode with cos^2 theta = eta, traced out."""
    cutoff, eta = 25, 0.7
    z, alpha = 0.3, 0.4 + 0.1j
    a = _annihilation(cutoff)
    eye = np.eye(cutoff)
    a1, a2 = np.kron(a, eye), np.kron(eye, a)
    single = _displace_unitary(a, alpha) @ _squeeze_unitary(a, z)
    prepared = np.kron(single, eye)
    coupler = _beamsplitter_unitary(a1, a2, math.acos(math.sqrt(eta)), 0.0)
    psi = (coupler @ prepared)[:, 0].reshape(cutoff, cutoff)
    rho = psi @ psi.conj().T

    state = gaussian_core.squeeze(gaussian_core.vacuum(1), 1, z)
    state = gaussian_core.loss(gaussian_core.displace(state, 1, alpha), 1, eta)
    husk = gaussian_core.husk(state)
    for m in range(5):
        for n in range(5):
            np.testing.assert_allclose(
                fock_extract.fock_element(state, [m], [n], husk), rho[m, n], atol=1e-10
            )

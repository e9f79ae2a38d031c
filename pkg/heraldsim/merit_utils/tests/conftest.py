"""Contains fixtures for tests for the merit_utils module."""

import math

import numpy as np
import pytest

from heraldsim.fock_utils.fock_extract import FockDensityMatrix


def _fock(m: int, cutoff: int) -> FockDensityMatrix:
    amplitudes = np.zeros(cutoff)
    amplitudes[m] = 1.0
    return FockDensityMatrix.from_pure(amplitudes)


@pytest.fixture(scope="module")
def vacuum_rho() -> FockDensityMatrix:
    """vacuum_rho returns |0><0| with cutoff 4."""
    return _fock(0, 4)


@pytest.fixture(scope="module")
def fock1_rho() -> FockDensityMatrix:
    """fock1_rho returns |1><1| with cutoff 4."""
    return _fock(1, 4)


@pytest.fixture(scope="module")
def thermal_rho() -> FockDensityMatrix:
    """thermal_rho returns a thermal state with one mean photon, truncated at 60."""
    nbar = 1.0
    diagonal = np.array([nbar**n / (1 + nbar) ** (n + 1) for n in range(60)])
    return FockDensityMatrix(60, np.diag(diagonal)).normalize()


@pytest.fixture(scope="module")
def squeezed_rho() -> FockDensityMatrix:
    """squeezed_rho returns squeezed vacuum with r = 0.8 from its closed-form amplitudes."""
    r, cutoff = 0.8, 50
    amplitudes = np.zeros(cutoff)
    for k in range(cutoff // 2):
        amplitudes[2 * k] = (
            (-np.tanh(r)) ** k
            * math.sqrt(math.factorial(2 * k))
            / (2**k * math.factorial(k))
            / math.sqrt(np.cosh(r))
        )
    return FockDensityMatrix.from_pure(amplitudes / np.linalg.norm(amplitudes))


@pytest.fixture(scope="module")
def coherent_rho() -> FockDensityMatrix:
    """coherent_rho returns the coherent state |1> truncated at 30."""
    amplitudes = np.array([np.exp(-0.5) / math.sqrt(math.factorial(n)) for n in range(30)])
    return FockDensityMatrix.from_pure(amplitudes)

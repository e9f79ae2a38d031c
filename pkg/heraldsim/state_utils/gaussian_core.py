"""
Multimode Gaussian states in the complex (annihilation/creation) ordering.

A state on l modes is stored as the means vector ``beta`` of length 2l and the
covariance ``sigma`` of size 2l x 2l. Index ``s`` (0 <= s < l) refers to the
annihilation operator of mode ``s + 1`` and index ``s + l`` to its creation
operator. Public functions take 1-based mode numbers.

Gaussian unitaries act through their symplectic matrix ``S`` as
``beta -> S beta`` and ``sigma -> S sigma S^dagger``.
"""

import logging
from dataclasses import dataclass
from typing import Iterable, List, Sequence

import numpy as np
import scipy.linalg as la

from heraldsim.exceptions import InvalidParameterException, UnphysicalStateException

from . import VACUUM_VARIANCE, tolerances


def _frozen(array: np.ndarray) -> np.ndarray:
    """Return a read-only complex copy of ``array``."""
    array = np.array(array, dtype=complex)
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class GaussianState:
    """
    A Gaussian state of ``num_modes`` bosonic modes.

    Attributes
    ----------
    num_modes : int
        the number of modes l
    means : np.ndarray
        complex means vector of length 2l
    cov : np.ndarray
        complex covariance matrix of size 2l x 2l
    """

    num_modes: int
    means: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        """Freeze the arrays and check their shapes."""
        dim = 2 * self.num_modes
        means = _frozen(self.means)
        cov = _frozen(self.cov)
        if self.num_modes < 1 or means.shape != (dim,) or cov.shape != (dim, dim):
            raise InvalidParameterException(
                f"inconsistent shapes for {self.num_modes} modes: "
                f"means {means.shape}, cov {cov.shape}"
            )
        object.__setattr__(self, "means", means)
        object.__setattr__(self, "cov", cov)


@dataclass(frozen=True)
class HuskQuantities:
    """
    Quantities derived from the Husimi covariance that enter Fock elements.

    Attributes
    ----------
    sigma_q : np.ndarray
        sigma + I/2
    a_mat : np.ndarray
        symmetric matrix X (I - sigma_q^-1)
    gamma : np.ndarray
        vector with gamma^T = beta^dagger sigma_q^-1
    log_prefactor_core : complex
        -beta^dagger sigma_q^-1 beta / 2 - ln det(sigma_q) / 2
    """

    sigma_q: np.ndarray
    a_mat: np.ndarray
    gamma: np.ndarray
    log_prefactor_core: complex


def validate_state(state: GaussianState) -> None:
    """
    Check the structural and physical invariants of a Gaussian state.

    Parameters
    ----------
    state : GaussianState
        the state to check

    Raises
    ------
    UnphysicalStateException
        if the means are not conjugate paired, the covariance is not Hermitian
        with the expected block structure, or sigma + I/2 is not positive definite
    """
    ell = state.num_modes
    beta, sigma = state.means, state.cov
    if np.max(np.abs(beta[ell:] - beta[:ell].conj())) > tolerances["conjugate_pairing"]:
        raise UnphysicalStateException("means are not conjugate paired")
    if la.norm(sigma - sigma.conj().T, 2) > tolerances["hermitian"]:
        raise UnphysicalStateException("covariance matrix is not Hermitian")
    w, y = sigma[:ell, :ell], sigma[ell:, :ell]
    block_error = max(
        np.max(np.abs(sigma[ell:, ell:] - w.conj())),
        np.max(np.abs(sigma[:ell, ell:] - y.conj())),
        np.max(np.abs(y - y.T)),
    )
    if block_error > tolerances["block_structure"]:
        raise UnphysicalStateException("covariance matrix breaks the block structure")
    eigenvalues = la.eigvalsh(_sigma_q(state))
    if eigenvalues.min() <= 0:
        raise UnphysicalStateException(
            f"sigma + I/2 is not positive definite (min eigenvalue {eigenvalues.min()})"
        )


def _mode_index(state: GaussianState, mode: int) -> int:
    """Convert a 1-based mode number into a 0-based index."""
    if not 1 <= mode <= state.num_modes:
        raise InvalidParameterException(
            f"mode {mode} out of range for a {state.num_modes}-mode state"
        )
    return mode - 1


def _mode_pair(state: GaussianState, i: int, j: int) -> List[int]:
    if i == j:
        raise InvalidParameterException(f"two-mode operation needs distinct modes, got {i}")
    return [_mode_index(state, i), _mode_index(state, j)]


def _apply_symplectic(state: GaussianState, symplectic: np.ndarray) -> GaussianState:
    return GaussianState(
        state.num_modes,
        symplectic @ state.means,
        symplectic @ state.cov @ symplectic.conj().T,
    )


def vacuum(num_modes: int) -> GaussianState:
    """
    Vacuum state on ``num_modes`` modes.

    Parameters
    ----------
    num_modes : int
        number of modes, at least 1

    Returns
    -------
    GaussianState
        zero means and covariance I/2
    """
    if num_modes < 1:
        raise InvalidParameterException(f"num_modes must be >= 1, got {num_modes}")
    dim = 2 * num_modes
    return GaussianState(num_modes, np.zeros(dim), VACUUM_VARIANCE * np.eye(dim))


def coherent(alpha: complex) -> GaussianState:
    """Single-mode coherent state ``|alpha>``."""
    return displace(vacuum(1), 1, alpha)


def thermal(mean_photons: float) -> GaussianState:
    """Single-mode thermal state with ``mean_photons`` average photons."""
    if mean_photons < 0:
        raise InvalidParameterException(
            f"mean photon number must be nonnegative, got {mean_photons}"
        )
    return GaussianState(1, np.zeros(2), (mean_photons + VACUUM_VARIANCE) * np.eye(2))


def squeeze(state: GaussianState, mode: int, z: complex) -> GaussianState:
    """
    Apply S(z) = exp[(z* a^2 - z a^dagger^2) / 2] to ``mode``.

    With z = r exp(i theta) the annihilation operator maps to
    cosh(r) a - exp(i theta) sinh(r) a^dagger.

    Parameters
    ----------
    state : GaussianState
        the input state
    mode : int
        1-based mode number
    z : complex
        squeezing parameter

    Returns
    -------
    GaussianState
        the squeezed state
    """
    k = _mode_index(state, mode)
    ell = state.num_modes
    r, theta = abs(z), np.angle(z)
    symplectic = np.eye(2 * ell, dtype=complex)
    symplectic[k, k] = symplectic[k + ell, k + ell] = np.cosh(r)
    symplectic[k, k + ell] = -np.exp(1j * theta) * np.sinh(r)
    symplectic[k + ell, k] = -np.exp(-1j * theta) * np.sinh(r)
    return _apply_symplectic(state, symplectic)


def two_mode_squeeze(state: GaussianState, i: int, j: int, zeta: complex) -> GaussianState:
    """
    Apply S2(zeta) = exp(zeta* a_i a_j - zeta a_i^dagger a_j^dagger).

    With zeta = r exp(i theta), a_i maps to cosh(r) a_i - exp(i theta) sinh(r) a_j^dagger
    and symmetrically for a_j.
    """
    ki, kj = _mode_pair(state, i, j)
    ell = state.num_modes
    r, theta = abs(zeta), np.angle(zeta)
    coupling = -np.exp(1j * theta) * np.sinh(r)
    symplectic = np.eye(2 * ell, dtype=complex)
    for a, b in ((ki, kj), (kj, ki)):
        symplectic[a, a] = symplectic[a + ell, a + ell] = np.cosh(r)
        symplectic[a, b + ell] = coupling
        symplectic[a + ell, b] = np.conj(coupling)
    return _apply_symplectic(state, symplectic)


def beamsplitter(
    state: GaussianState, i: int, j: int, theta: float, phi: float
) -> GaussianState:
    """
    Apply B_ij(theta, phi) = exp[theta (e^{i phi} a_i a_j^dagger - e^{-i phi} a_i^dagger a_j)].

    The modes transform as a_i -> cos(theta) a_i - e^{-i phi} sin(theta) a_j and
    a_j -> e^{i phi} sin(theta) a_i + cos(theta) a_j.
    """
    ki, kj = _mode_pair(state, i, j)
    ell = state.num_modes
    unitary = np.array(
        [
            [np.cos(theta), -np.exp(-1j * phi) * np.sin(theta)],
            [np.exp(1j * phi) * np.sin(theta), np.cos(theta)],
        ]
    )
    symplectic = np.eye(2 * ell, dtype=complex)
    symplectic[np.ix_([ki, kj], [ki, kj])] = unitary
    symplectic[np.ix_([ki + ell, kj + ell], [ki + ell, kj + ell])] = unitary.conj()
    return _apply_symplectic(state, symplectic)


def displace(state: GaussianState, mode: int, alpha: complex) -> GaussianState:
    """Apply D(alpha) = exp(alpha a^dagger - alpha* a) to ``mode``."""
    k = _mode_index(state, mode)
    means = np.array(state.means)
    means[k] += alpha
    means[k + state.num_modes] += np.conj(alpha)
    return GaussianState(state.num_modes, means, state.cov)


def loss(state: GaussianState, mode: int, eta: float) -> GaussianState:
    """
    Send ``mode`` through a pure-loss channel with transmission ``eta``.

    The mode's rows and columns are scaled by sqrt(eta) and the vacuum
    covariance (1 - eta) I/2 is added on the mode block.

    Raises
    ------
    InvalidParameterException
        if eta is outside [0, 1] or the mode is out of range
    """
    if not 0.0 <= eta <= 1.0:
        raise InvalidParameterException(f"transmission eta must lie in [0, 1], got {eta}")
    k = _mode_index(state, mode)
    idx = [k, k + state.num_modes]
    scale = np.ones(2 * state.num_modes)
    scale[idx] = np.sqrt(eta)
    cov = scale[:, None] * state.cov * scale[None, :]
    cov[idx, idx] += (1.0 - eta) * VACUUM_VARIANCE
    return GaussianState(state.num_modes, scale * state.means, cov)


def _sigma_q(state: GaussianState) -> np.ndarray:
    return state.cov + VACUUM_VARIANCE * np.eye(2 * state.num_modes)


def husk(state: GaussianState) -> HuskQuantities:
    """
    Compute sigma_Q, A, gamma and the state dependent part of the Fock prefactor.

    Parameters
    ----------
    state : GaussianState
        the state

    Returns
    -------
    HuskQuantities
        the derived quantities

    Raises
    ------
    UnphysicalStateException
        if sigma_Q is not positive definite or its condition number exceeds 1e12
    """
    ell = state.num_modes
    sigma_q = _sigma_q(state)
    condition = np.linalg.cond(sigma_q)
    if not np.isfinite(condition) or condition > tolerances["condition_number"]:
        logging.error(f"sigma_Q is ill conditioned (condition number {condition:.3e})")
        raise UnphysicalStateException(
            f"sigma_Q is singular or ill conditioned (condition number {condition:.3e})"
        )
    try:
        factor = la.cho_factor(sigma_q, lower=True)
    except la.LinAlgError:
        logging.error("sigma_Q is not positive definite")
        raise UnphysicalStateException("sigma_Q is not positive definite")
    sigma_q_inv = la.cho_solve(factor, np.eye(2 * ell, dtype=complex))
    x_mat = np.block(
        [[np.zeros((ell, ell)), np.eye(ell)], [np.eye(ell), np.zeros((ell, ell))]]
    )
    a_mat = x_mat @ (np.eye(2 * ell) - sigma_q_inv)
    a_mat = 0.5 * (a_mat + a_mat.T)
    beta = state.means
    gamma = beta.conj() @ sigma_q_inv
    log_det = 2.0 * np.sum(np.log(np.abs(np.diag(factor[0]))))
    log_prefactor_core = -0.5 * (beta.conj() @ sigma_q_inv @ beta) - 0.5 * log_det
    return HuskQuantities(sigma_q, a_mat, gamma, complex(log_prefactor_core))


def _select_modes(state: GaussianState, modes: Sequence[int]) -> GaussianState:
    ell = state.num_modes
    ks = [_mode_index(state, mode) for mode in modes]
    idx = ks + [k + ell for k in ks]
    return GaussianState(len(ks), state.means[idx], state.cov[np.ix_(idx, idx)])


def reduce(state: GaussianState, keep_modes: Iterable[int]) -> GaussianState:
    """
    Trace out every mode not in ``keep_modes``.

    Parameters
    ----------
    state : GaussianState
        the state
    keep_modes : Iterable[int]
        1-based mode numbers to keep; the kept modes retain their relative order

    Returns
    -------
    GaussianState
        the reduced state

    Raises
    ------
    InvalidParameterException
        if ``keep_modes`` is empty or holds an out of range mode
    """
    keep = sorted(set(keep_modes))
    if not keep:
        raise InvalidParameterException("reduce needs at least one mode to keep")
    return _select_modes(state, keep)


def permute_modes(state: GaussianState, order: Sequence[int]) -> GaussianState:
    """
    Reorder the modes so that new mode ``p`` is old mode ``order[p - 1]``.

    Raises
    ------
    InvalidParameterException
        if ``order`` is not a permutation of 1..l
    """
    if sorted(order) != list(range(1, state.num_modes + 1)):
        raise InvalidParameterException(
            f"{list(order)} is not a permutation of the {state.num_modes} modes"
        )
    return _select_modes(state, order)


def mean_photon_number(state: GaussianState, mode: int) -> float:
    """Mean photon number <a^dagger a> of ``mode``."""
    k = _mode_index(state, mode)
    return float(np.real(state.cov[k, k]) - VACUUM_VARIANCE + abs(state.means[k]) ** 2)


def total_mean_photon_number(state: GaussianState) -> float:
    """Mean photon number summed over all modes."""
    return sum(mean_photon_number(state, mode) for mode in range(1, state.num_modes + 1))


def symplectic_eigenvalues(state: GaussianState) -> np.ndarray:
    """
    Symplectic eigenvalues of the covariance, sorted ascending.

    They are the moduli of the eigenvalues of Z sigma with Z = diag(I, -I); each
    appears twice there, once per sign. Pure states have all values equal to 1/2.
    """
    ell = state.num_modes
    z_mat = np.diag(np.concatenate([np.ones(ell), -np.ones(ell)]))
    moduli = np.sort(np.abs(np.linalg.eigvals(z_mat @ state.cov)))
    return moduli[::2]


def purity(state: GaussianState) -> float:
    """Purity Tr(rho^2) = 1 / sqrt(det(2 sigma))."""
    return float(1.0 / np.sqrt(np.real(np.linalg.det(2.0 * state.cov))))

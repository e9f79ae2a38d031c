"""
Fock matrix elements of Gaussian states and heralded single-mode states.

An element of an l-mode Gaussian state is

    <m|rho|n> = T lhaf(A~)

where A~ is the husk matrix A with row and column s repeated n_s times and row
and column s + l repeated m_s times, its diagonal replaced by gamma, and
T = exp(-beta^dagger sigma_Q^-1 beta / 2) / sqrt(det(sigma_Q) prod n_s! m_s!).
T is evaluated in log space.

Heralding conditions the last mode on a photon pattern measured on the others.
"""

import itertools
import logging
import math
from dataclasses import dataclass
from typing import Dict, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np

from heraldsim.exceptions import (
    ConvergenceException,
    InvalidParameterException,
    ZeroProbabilityException,
)
from heraldsim.lhaf_utils.lhaf_engine import LoopMatrixSpec, lhaf_repeated
from heraldsim.state_utils.gaussian_core import (
    GaussianState,
    HuskQuantities,
    husk,
    mean_photon_number,
    reduce,
)

from . import IMAG_RESIDUE_TOL, MIN_CUTOFF, ZERO_PROBABILITY, density_tolerances


@dataclass(frozen=True)
class HeraldPattern:
    """
    Photon numbers measured on the detected modes 1..l-1.

    Attributes
    ----------
    counts : Tuple[int, ...]
        nonnegative photon number of each detected mode
    """

    counts: Tuple[int, ...]

    def __post_init__(self):
        """Check that the counts are nonnegative integers."""
        counts = tuple(int(c) for c in self.counts)
        if any(c < 0 for c in counts):
            raise InvalidParameterException(f"photon counts must be nonnegative, got {counts}")
        object.__setattr__(self, "counts", counts)

    @property
    def total(self) -> int:
        """Total number of detected photons."""
        return sum(self.counts)


PatternLike = Union[HeraldPattern, Sequence[int]]


def _as_pattern(pattern: PatternLike) -> HeraldPattern:
    if isinstance(pattern, HeraldPattern):
        return pattern
    return HeraldPattern(tuple(pattern))


@dataclass(frozen=True)
class FockDensityMatrix:
    """
    A single-mode density matrix truncated at ``cutoff``.

    Attributes
    ----------
    cutoff : int
        the truncation d
    entries : np.ndarray
        complex d x d matrix with entries[n, m] = <n|rho|m>
    normalized : bool
        whether the trace has been scaled to 1
    """

    cutoff: int
    entries: np.ndarray
    normalized: bool = False

    def __post_init__(self):
        """Freeze the entries and check the shape."""
        entries = np.array(self.entries, dtype=complex)
        if self.cutoff < 1 or entries.shape != (self.cutoff, self.cutoff):
            raise InvalidParameterException(
                f"entries of shape {entries.shape} do not match cutoff {self.cutoff}"
            )
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_pure(cls, amplitudes: Sequence[complex]) -> "FockDensityMatrix":
        """Build |psi><psi| from Fock amplitudes."""
        psi = np.asarray(amplitudes, dtype=complex)
        return cls(psi.shape[0], np.outer(psi, psi.conj()), normalized=True)

    def trace(self) -> float:
        """Real part of the trace."""
        return float(np.real(np.trace(self.entries)))

    def normalize(self) -> "FockDensityMatrix":
        """Return the matrix scaled to unit trace."""
        trace = self.trace()
        if trace <= 0:
            raise ZeroProbabilityException("cannot normalize a density matrix with zero trace")
        return FockDensityMatrix(self.cutoff, self.entries / trace, normalized=True)

    def padded(self, cutoff: int) -> "FockDensityMatrix":
        """Return the matrix embedded in a larger cutoff with zeros."""
        if cutoff < self.cutoff:
            raise InvalidParameterException(
                f"cannot pad cutoff {self.cutoff} down to {cutoff}"
            )
        entries = np.zeros((cutoff, cutoff), dtype=complex)
        entries[: self.cutoff, : self.cutoff] = self.entries
        return FockDensityMatrix(cutoff, entries, self.normalized)

    def hermiticity_error(self) -> float:
        """Largest entry of |rho - rho^dagger|."""
        return float(np.max(np.abs(self.entries - self.entries.conj().T)))

    def min_eigenvalue(self) -> float:
        """Smallest eigenvalue of the Hermitian part."""
        hermitian = 0.5 * (self.entries + self.entries.conj().T)
        return float(np.linalg.eigvalsh(hermitian)[0])

    def purity(self) -> float:
        """Tr(rho^2)."""
        return float(np.real(np.trace(self.entries @ self.entries)))

    def mean_photon_number(self) -> float:
        """<a^dagger a> = sum n rho_nn."""
        return float(np.real(np.diag(self.entries)) @ np.arange(self.cutoff))

    def mean_amplitude(self) -> complex:
        """<a> = sum sqrt(n) rho_{n, n-1}."""
        n = np.arange(1, self.cutoff)
        return complex(np.sum(np.sqrt(n) * self.entries[n, n - 1]))

    def is_valid(self) -> bool:
        """Check Hermiticity, unit trace and positivity within tolerance."""
        return (
            self.hermiticity_error() <= density_tolerances["hermitian"]
            and abs(self.trace() - 1.0) <= density_tolerances["trace"]
            and self.min_eigenvalue() >= density_tolerances["min_eigenvalue"]
        )


class HeraldResult(NamedTuple):
    """Normalized heralded state with its probability and the cutoff used."""

    rho: FockDensityMatrix
    probability: float
    d_used: int


def _as_counts(values: Sequence[int], name: str, length: int) -> np.ndarray:
    counts = np.asarray(values, dtype=np.int64).reshape(-1)
    if counts.shape[0] != length:
        raise InvalidParameterException(
            f"{name} has {counts.shape[0]} entries, expected {length}"
        )
    if np.any(counts < 0):
        raise InvalidParameterException(f"{name} must be nonnegative, got {counts.tolist()}")
    return counts


def fock_element(
    state: GaussianState,
    m: Sequence[int],
    n: Sequence[int],
    husk_quantities: Optional[HuskQuantities] = None,
) -> complex:
    """
    fock_element computes <m|rho|n> for a Gaussian state.

    Parameters
    ----------
    state : GaussianState
        the l-mode state
    m : Sequence[int]
        photon numbers of the bra <m|, length l
    n : Sequence[int]
        photon numbers of the ket |n>, length l
    husk_quantities : Optional[HuskQuantities], optional
        precomputed ``husk(state)`` to reuse across elements, by default None

    Returns
    -------
    complex
        the matrix element

    Raises
    ------
    UnphysicalStateException
        if sigma_Q is not positive definite or is ill conditioned
    """
    ell = state.num_modes
    m = _as_counts(m, "m", ell)
    n = _as_counts(n, "n", ell)
    if husk_quantities is None:
        husk_quantities = husk(state)
    reps = np.concatenate([n, m])
    spec = LoopMatrixSpec(husk_quantities.a_mat, husk_quantities.gamma, reps)
    log_factorials = sum(math.lgamma(k + 1) for k in reps.tolist())
    log_prefactor = husk_quantities.log_prefactor_core - 0.5 * log_factorials
    return complex(np.exp(log_prefactor) * lhaf_repeated(spec))


def _check_herald_inputs(state: GaussianState, pattern: PatternLike) -> HeraldPattern:
    pattern = _as_pattern(pattern)
    if state.num_modes < 2:
        raise InvalidParameterException("heralding needs at least two modes")
    if len(pattern.counts) != state.num_modes - 1:
        raise InvalidParameterException(
            f"pattern {pattern.counts} does not cover the {state.num_modes - 1} detected modes"
        )
    return pattern


def _herald_entry(
    state: GaussianState, pattern: HeraldPattern, row: int, col: int, husk_q: HuskQuantities
) -> complex:
    return fock_element(state, pattern.counts + (row,), pattern.counts + (col,), husk_q)


def _herald_matrix(
    state: GaussianState,
    pattern: HeraldPattern,
    cutoff: int,
    husk_q: HuskQuantities,
    symmetrize: bool,
    diagonal: Optional[Sequence[float]] = None,
) -> np.ndarray:
    entries = np.zeros((cutoff, cutoff), dtype=complex)
    for row in range(cutoff):
        if symmetrize and diagonal is not None:
            entries[row, row] = diagonal[row]
        elif symmetrize:
            entries[row, row] = np.real(_herald_entry(state, pattern, row, row, husk_q))
        for col in range(0 if not symmetrize else row + 1, cutoff):
            entries[row, col] = _herald_entry(state, pattern, row, col, husk_q)
            if symmetrize:
                entries[col, row] = np.conj(entries[row, col])
    return entries


def herald_raw(
    state: GaussianState,
    pattern: PatternLike,
    cutoff: int,
    symmetrize: bool = True,
) -> Tuple[FockDensityMatrix, float]:
    """
    herald_raw builds the unnormalized heralded state of the last mode.

    Parameters
    ----------
    state : GaussianState
        the pre-measurement state with l >= 2 modes; mode l is heralded
    pattern : PatternLike
        photon numbers measured on modes 1..l-1
    cutoff : int
        truncation d of the heralded mode
    symmetrize : bool, optional
        compute the upper triangle only and fill the rest by conjugation;
        when False every entry is computed, by default True

    Returns
    -------
    Tuple[FockDensityMatrix, float]
        rho~ with entries <n_h, i|rho|n_h, j> and its trace p~
    """
    pattern = _check_herald_inputs(state, pattern)
    if cutoff < 1:
        raise InvalidParameterException(f"cutoff must be at least 1, got {cutoff}")
    husk_q = husk(state)
    entries = _herald_matrix(state, pattern, cutoff, husk_q, symmetrize)
    rho = FockDensityMatrix(cutoff, entries)
    return rho, rho.trace()


def herald_probability_exact(state: GaussianState, pattern: PatternLike) -> float:
    """
    herald_probability_exact computes p = <n_h|rho_[l-1]|n_h>.

    The state is reduced to the detected modes 1..l-1 so no cutoff is involved.

    Parameters
    ----------
    state : GaussianState
        the pre-measurement state
    pattern : PatternLike
        photon numbers measured on modes 1..l-1

    Returns
    -------
    float
        the probability of observing the pattern
    """
    pattern = _check_herald_inputs(state, pattern)
    detected = reduce(state, range(1, state.num_modes))
    value = fock_element(detected, pattern.counts, pattern.counts)
    if abs(value.imag) > IMAG_RESIDUE_TOL:
        logging.warning(
            f"probability of pattern {pattern.counts} has imaginary residue {value.imag:.3e}"
        )
    return float(value.real)


def herald_adaptive(
    state: GaussianState,
    pattern: PatternLike,
    rel_tol: float = 1e-6,
    d_max: int = 512,
    symmetrize: bool = True,
) -> HeraldResult:
    """
    herald_adaptive heralds the last mode with a cutoff chosen from the exact probability.

    Starting from d0 = max(4, 2 ceil(<n_l>) + 4) the cutoff is doubled while
    |p - p~(d)| / p > rel_tol. Only diagonal elements are computed during the
    search. The reported cutoff d_used is the smallest one whose partial trace
    already meets the tolerance; the full matrix is filled at d_used and
    normalized by its trace.

    Parameters
    ----------
    state : GaussianState
        the pre-measurement state with l >= 2 modes; mode l is heralded
    pattern : PatternLike
        photon numbers measured on modes 1..l-1
    rel_tol : float, optional
        relative tolerance on the missing probability, by default 1e-6
    d_max : int, optional
        largest cutoff tried, by default 512
    symmetrize : bool, optional
        passed on to the final matrix fill, by default True

    Returns
    -------
    HeraldResult
        normalized rho, exact probability p and d_used

    Raises
    ------
    ZeroProbabilityException
        if the pattern has probability zero
    ConvergenceException
        if d_max is reached before the tolerance is met
    """
    if not 0.0 < rel_tol < 1.0:
        raise InvalidParameterException(f"rel_tol must lie in (0, 1), got {rel_tol}")
    if d_max < 1:
        raise InvalidParameterException(f"d_max must be positive, got {d_max}")
    pattern = _check_herald_inputs(state, pattern)
    probability = herald_probability_exact(state, pattern)
    if probability <= ZERO_PROBABILITY:
        logging.error(f"pattern {pattern.counts} has probability {probability:.3e}")
        raise ZeroProbabilityException(
            f"pattern {pattern.counts} is never observed (p = {probability:.3e})"
        )

    husk_q = husk(state)
    heralded_photons = mean_photon_number(state, state.num_modes)
    cutoff = min(max(MIN_CUTOFF, 2 * math.ceil(heralded_photons) + 4), d_max)
    diagonal = []
    while True:
        for k in range(len(diagonal), cutoff):
            diagonal.append(float(np.real(_herald_entry(state, pattern, k, k, husk_q))))
        residual = abs(probability - math.fsum(diagonal)) / probability
        logging.debug(f"cutoff {cutoff}: relative residual {residual:.3e}")
        if residual <= rel_tol:
            break
        if cutoff >= d_max:
            logging.error(f"cutoff did not converge below d_max={d_max}")
            raise ConvergenceException(
                f"heralded state did not converge with d_max={d_max} "
                f"(relative residual {residual:.3e})",
                residual=residual,
            )
        cutoff = min(2 * cutoff, d_max)

    partial = np.cumsum(diagonal)
    converged = np.abs(probability - partial) / probability <= rel_tol
    d_used = int(np.argmax(converged)) + 1 if converged.any() else len(diagonal)
    entries = _herald_matrix(state, pattern, d_used, husk_q, symmetrize, diagonal[:d_used])
    rho = FockDensityMatrix(d_used, entries).normalize()
    logging.info(
        f"heralded pattern {pattern.counts}: p = {probability:.6g}, d_used = {d_used}"
    )
    return HeraldResult(rho, probability, d_used)


def pattern_probabilities(
    state: GaussianState, modes: Sequence[int], max_total: int
) -> Dict[Tuple[int, ...], float]:
    """
    pattern_probabilities lists the probability of every pattern on ``modes``.

    Parameters
    ----------
    state : GaussianState
        the state
    modes : Sequence[int]
        1-based detected modes
    max_total : int
        largest total photon number included

    Returns
    -------
    Dict[Tuple[int, ...], float]
        probability of each pattern with at most ``max_total`` photons, keyed in
        the order of the sorted ``modes``
    """
    detected = reduce(state, modes)
    husk_q = husk(detected)
    probabilities = {}
    for counts in itertools.product(range(max_total + 1), repeat=detected.num_modes):
        if sum(counts) <= max_total:
            probabilities[counts] = float(
                np.real(fock_element(detected, counts, counts, husk_q))
            )
    return probabilities


def single_mode_density_matrix(
    state: GaussianState, mode: int, cutoff: int
) -> FockDensityMatrix:
    """
    single_mode_density_matrix returns the reduced state of ``mode`` in the Fock basis.

    The result is not normalized; its trace falls short of 1 by the population
    above the cutoff.
    """
    if cutoff < 1:
        raise InvalidParameterException(f"cutoff must be at least 1, got {cutoff}")
    marginal = reduce(state, [mode])
    husk_q = husk(marginal)
    entries = np.zeros((cutoff, cutoff), dtype=complex)
    for row in range(cutoff):
        for col in range(row, cutoff):
            entries[row, col] = fock_element(marginal, [row], [col], husk_q)
            entries[col, row] = np.conj(entries[row, col])
        entries[row, row] = np.real(entries[row, row])
    return FockDensityMatrix(cutoff, entries)

"""Figures of merit of heralded states: fidelity and resource counts."""

import math
from typing import Tuple

import numpy as np
from scipy.optimize import minimize_scalar

from heraldsim.exceptions import InvalidParameterException
from heraldsim.fock_utils.fock_extract import FockDensityMatrix

from .targets import PureTarget, target_cat


def fidelity(rho: FockDensityMatrix, target: PureTarget) -> float:
    """
    fidelity computes F = <psi|rho|psi> of a state against a pure target.

    The smaller of the two cutoffs is padded with zeros.

    Parameters
    ----------
    rho : FockDensityMatrix
        the state
    target : PureTarget
        the target |psi>

    Returns
    -------
    float
        the fidelity
    """
    cutoff = max(rho.cutoff, target.cutoff)
    rho = rho.padded(cutoff)
    psi = target.padded(cutoff).amplitudes
    return float(np.real(psi.conj() @ rho.entries @ psi))


def required_copies(p: float, epsilon: float) -> int:
    """
    required_copies counts the parallel heralding attempts needed per output state.

    With N attempts the chance that none succeeds is (1 - p)^N; the smallest N
    with (1 - p)^N < epsilon is floor(ln(epsilon) / ln(1 - p)) + 1.

    Parameters
    ----------
    p : float
        success probability of one attempt, in (0, 1]
    epsilon : float
        tolerated failure rate, in (0, 1)

    Returns
    -------
    int
        the number of copies
    """
    if not 0.0 < p <= 1.0:
        raise InvalidParameterException(f"probability must lie in (0, 1], got {p}")
    if not 0.0 < epsilon < 1.0:
        raise InvalidParameterException(f"epsilon must lie in (0, 1), got {epsilon}")
    if p == 1.0:
        return 1
    return math.floor(math.log(epsilon) / math.log1p(-p)) + 1


def experiment_time(n_runs: int, frequency: float, p: float) -> float:
    """Seconds needed to herald ``n_runs`` states at repetition ``frequency`` (Hz)."""
    if frequency <= 0 or not 0.0 < p <= 1.0:
        raise InvalidParameterException(
            f"frequency must be positive and p in (0, 1], got {frequency} and {p}"
        )
    return n_runs / (frequency * p)


def optimal_cat_alpha(
    rho: FockDensityMatrix,
    parity: str,
    phase: float = 0.5 * np.pi,
    bounds: Tuple[float, float] = (0.05, 3.0),
) -> Tuple[complex, float]:
    """
    optimal_cat_alpha finds the cat amplitude of fixed phase closest to ``rho``.

    Parameters
    ----------
    rho : FockDensityMatrix
        the state
    parity : str
        ``"even"`` or ``"odd"``
    phase : float, optional
        argument of alpha, by default pi/2
    bounds : Tuple[float, float], optional
        search interval of |alpha|, by default (0.05, 3.0)

    Returns
    -------
    Tuple[complex, float]
        the best alpha and its fidelity
    """
    direction = np.exp(1j * phase)
    cutoff = max(rho.cutoff, 40)

    def _infidelity(magnitude: float) -> float:
        return 1.0 - fidelity(rho, target_cat(magnitude * direction, parity, cutoff))

    result = minimize_scalar(_infidelity, bounds=bounds, method="bounded")
    return complex(result.x * direction), 1.0 - float(result.fun)

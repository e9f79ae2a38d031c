"""
Wigner function of a truncated single-mode density matrix.

The convention is alpha = (x + i p) / sqrt(2): the vacuum peaks at W(0, 0) = 1/pi
and W integrates to 1 under dx dp. W is evaluated from the Fock representation
through the Laguerre kernel,

    W(x, p) = exp(-b / 2) / pi * Re sum_L (a2^L / sqrt(L!)) c_L(b),
    c_L(b) = sum_n (2 - delta_L0) rho_{n, n+L} f_n^L(b),

with a2 = sqrt(2) (x + i p), b = |a2|^2 and f_n^L the Laguerre polynomials
L_n^L scaled by (-1)^n sqrt(n! L! / (n + L)!), evaluated by their three-term
recurrence. The sum over L is done by Horner's rule from the highest offset.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from heraldsim.exceptions import ConvergenceException, InvalidParameterException
from heraldsim.fock_utils.fock_extract import FockDensityMatrix

from . import MIN_GRID_POINTS, wln_defaults


@dataclass(frozen=True)
class WignerGrid:
    """
    W sampled at the midpoints of an n_pts x n_pts grid on [-L, L]^2.

    Attributes
    ----------
    half_extent : float
        L
    n_pts : int
        points per axis
    values : np.ndarray
        real array with values[i, j] = W(x_i, p_j)
    """

    half_extent: float
    n_pts: int
    values: np.ndarray

    @property
    def spacing(self) -> float:
        """Grid spacing 2L / n_pts along each axis."""
        return 2.0 * self.half_extent / self.n_pts

    @property
    def axis(self) -> np.ndarray:
        """Midpoint coordinates shared by x and p."""
        return grid_axis(self.half_extent, self.n_pts)

    def integral(self) -> float:
        """Riemann sum of W dx dp."""
        return float(np.sum(self.values) * self.spacing**2)

    def abs_integral(self) -> float:
        """Riemann sum of |W| dx dp."""
        return float(np.sum(np.abs(self.values)) * self.spacing**2)


@dataclass(frozen=True)
class WLNQuadrature:
    """
    Settings of the Wigner logarithmic negativity quadrature.

    Attributes
    ----------
    n_pts : int
        starting points per axis
    abs_tol : float
        largest change of the estimate accepted between two refinements
    growth : float
        factor applied to both L and n_pts at each refinement
    max_refinements : int
        number of refinements tried before giving up
    half_extent : Optional[float]
        starting L; None sizes the grid from the state's moments
    """

    n_pts: int = wln_defaults["n_pts"]
    abs_tol: float = wln_defaults["abs_tol"]
    growth: float = wln_defaults["growth"]
    max_refinements: int = wln_defaults["max_refinements"]
    half_extent: Optional[float] = None


def grid_axis(half_extent: float, n_pts: int) -> np.ndarray:
    """Midpoints -L + (i + 1/2) 2L / n for i < n; odd n puts a point at 0."""
    spacing = 2.0 * half_extent / n_pts
    return -half_extent + (np.arange(n_pts) + 0.5) * spacing


def _laguerre_sum(offset: int, b: np.ndarray, coefficients: np.ndarray) -> np.ndarray:
    """Sum_n coefficients[n] f_n^offset(b) with the scaled Laguerre recurrence."""
    total = np.full(b.shape, coefficients[0], dtype=complex)
    if coefficients.shape[0] == 1:
        return total
    previous = np.ones(b.shape)
    current = -(1.0 + offset - b) / math.sqrt(1.0 + offset)
    total = total + coefficients[1] * current
    for n in range(1, coefficients.shape[0] - 1):
        following = -(
            (2 * n + 1 + offset - b) * current + math.sqrt(n * (n + offset)) * previous
        ) / math.sqrt((n + 1) * (n + 1 + offset))
        total = total + coefficients[n + 1] * following
        previous, current = current, following
    return total


def wigner_values(rho: FockDensityMatrix, x: np.ndarray, p: np.ndarray) -> np.ndarray:
    """
    wigner_values evaluates W at the points (x, p).

    Parameters
    ----------
    rho : FockDensityMatrix
        the state
    x, p : np.ndarray
        broadcastable coordinate arrays

    Returns
    -------
    np.ndarray
        real W values with the broadcast shape of x and p
    """
    x, p = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(p, dtype=float))
    a2 = math.sqrt(2.0) * (x + 1j * p)
    b = np.abs(a2) ** 2
    size = rho.cutoff
    weighted = rho.entries * (2.0 - np.eye(size))
    w = np.zeros(b.shape, dtype=complex)
    for offset in range(size - 1, -1, -1):
        w = _laguerre_sum(offset, b, np.diagonal(weighted, offset)) + w * a2 / math.sqrt(
            offset + 1
        )
    return np.real(w) * np.exp(-0.5 * b) / np.pi


def wigner(rho: FockDensityMatrix, half_extent: float, n_pts: int) -> WignerGrid:
    """
    wigner samples W on the midpoint grid of [-L, L]^2.

    Parameters
    ----------
    rho : FockDensityMatrix
        the state
    half_extent : float
        L > 0
    n_pts : int
        points per axis, at least 16

    Returns
    -------
    WignerGrid
        the sampled values
    """
    if half_extent <= 0:
        raise InvalidParameterException(f"half extent must be positive, got {half_extent}")
    if n_pts < MIN_GRID_POINTS:
        raise InvalidParameterException(
            f"n_pts must be at least {MIN_GRID_POINTS}, got {n_pts}"
        )
    axis = grid_axis(half_extent, n_pts)
    values = wigner_values(rho, axis[:, None], axis[None, :])
    return WignerGrid(float(half_extent), int(n_pts), values)


def auto_half_extent(rho: FockDensityMatrix, scale: float = wln_defaults["extent_scale"]) -> float:
    """L = scale sqrt(2 <n> + 1) + max(|<x>|, |<p>|)."""
    mean_amplitude = rho.mean_amplitude()
    offset = math.sqrt(2.0) * max(abs(mean_amplitude.real), abs(mean_amplitude.imag))
    return scale * math.sqrt(2.0 * max(rho.mean_photon_number(), 0.0) + 1.0) + offset


def _odd(n: float) -> int:
    return int(round(n)) | 1


def _log_negativity(grid: WignerGrid) -> float:
    # the W sum is Tr(rho) = 1 up to the same discretization error as the |W| sum
    total = grid.integral()
    if total <= 0:
        raise ConvergenceException(
            f"W integrates to {total:.3e} on L={grid.half_extent:.3f}; the grid is too small"
        )
    return math.log(grid.abs_integral() / total)


def wln(rho: FockDensityMatrix, quad: Optional[WLNQuadrature] = None) -> float:
    """
    wln computes the Wigner logarithmic negativity ln(integral |W| dx dp).

    The |W| sum is divided by the W sum on the same grid, so the estimate is
    never negative. The quadrature is refined by growing L and n_pts together
    until two successive estimates differ by less than ``quad.abs_tol``.

    Parameters
    ----------
    rho : FockDensityMatrix
        a normalized state
    quad : Optional[WLNQuadrature], optional
        quadrature settings, by default WLNQuadrature()

    Returns
    -------
    float
        the last estimate

    Raises
    ------
    ConvergenceException
        if the estimates still move by more than abs_tol after the allowed
        refinements; the message carries the last two estimates
    """
    if quad is None:
        quad = WLNQuadrature()
    half_extent = quad.half_extent if quad.half_extent is not None else auto_half_extent(rho)
    n_pts = _odd(quad.n_pts)
    estimate = _log_negativity(wigner(rho, half_extent, n_pts))
    previous, change = estimate, float("inf")
    for _ in range(quad.max_refinements):
        half_extent *= quad.growth
        n_pts = _odd(n_pts * quad.growth)
        previous = estimate
        estimate = _log_negativity(wigner(rho, half_extent, n_pts))
        change = abs(estimate - previous)
        logging.debug(f"WLN {estimate:.6f} on L={half_extent:.3f}, n_pts={n_pts}")
        if change < quad.abs_tol:
            return estimate
    logging.error("WLN quadrature did not converge")
    raise ConvergenceException(
        f"WLN estimates {previous:.6f} and {estimate:.6f} differ by {change:.2e}",
        residual=change,
    )


def purity_from_wigner(grid: WignerGrid) -> float:
    """Tr(rho^2) = 2 pi integral W^2 dx dp."""
    return float(2.0 * np.pi * np.sum(grid.values**2) * grid.spacing**2)


def wigner_minimum(grid: WignerGrid) -> float:
    """Most negative value of W on the grid, 0 if W is nonnegative there."""
    return float(min(grid.values.min(), 0.0))

"""Pure target states in a truncated Fock basis."""

import logging
import math
from dataclasses import dataclass

import numpy as np

from heraldsim.exceptions import InvalidParameterException
from heraldsim.fock_utils.fock_extract import FockDensityMatrix

from . import CAT_PARITIES, TRUNCATION_TOL


@dataclass(frozen=True)
class PureTarget:
    """
    A normalized pure state truncated at ``cutoff``.

    Attributes
    ----------
    cutoff : int
        number of Fock amplitudes d
    amplitudes : np.ndarray
        complex amplitudes <n|psi>, n < d, with unit norm
    truncation_loss : float
        norm missing from the untruncated state before renormalization
    """

    cutoff: int
    amplitudes: np.ndarray
    truncation_loss: float = 0.0

    def __post_init__(self):
        """Freeze the amplitudes and check the shape."""
        amplitudes = np.array(self.amplitudes, dtype=complex)
        if amplitudes.shape != (self.cutoff,):
            raise InvalidParameterException(
                f"{amplitudes.shape[0]} amplitudes do not match cutoff {self.cutoff}"
            )
        amplitudes.setflags(write=False)
        object.__setattr__(self, "amplitudes", amplitudes)

    @property
    def truncated(self) -> bool:
        """Whether the truncation dropped more than the tolerated norm."""
        return self.truncation_loss > TRUNCATION_TOL

    def padded(self, cutoff: int) -> "PureTarget":
        """Return the target with zero amplitudes appended up to ``cutoff``."""
        if cutoff < self.cutoff:
            raise InvalidParameterException(f"cannot pad cutoff {self.cutoff} down to {cutoff}")
        amplitudes = np.zeros(cutoff, dtype=complex)
        amplitudes[: self.cutoff] = self.amplitudes
        return PureTarget(cutoff, amplitudes, self.truncation_loss)

    def density_matrix(self) -> FockDensityMatrix:
        """|psi><psi| as a density matrix."""
        return FockDensityMatrix.from_pure(self.amplitudes)


def _check_cutoff(cutoff: int, minimum: int = 1) -> None:
    if cutoff < minimum:
        raise InvalidParameterException(f"cutoff must be at least {minimum}, got {cutoff}")


def target_fock(m: int, cutoff: int) -> PureTarget:
    """
    target_fock returns the Fock state |m>.

    Raises
    ------
    InvalidParameterException
        if m is negative or does not fit below the cutoff
    """
    _check_cutoff(cutoff)
    if not 0 <= m < cutoff:
        raise InvalidParameterException(f"Fock state {m} does not fit in cutoff {cutoff}")
    amplitudes = np.zeros(cutoff, dtype=complex)
    amplitudes[m] = 1.0
    return PureTarget(cutoff, amplitudes)


def coherent_amplitudes(alpha: complex, cutoff: int) -> np.ndarray:
    """Amplitudes e^{-|alpha|^2/2} alpha^n / sqrt(n!) for n < cutoff."""
    amplitudes = np.zeros(cutoff, dtype=complex)
    amplitudes[0] = np.exp(-0.5 * abs(alpha) ** 2)
    for n in range(1, cutoff):
        amplitudes[n] = amplitudes[n - 1] * alpha / math.sqrt(n)
    return amplitudes


def target_cat(alpha: complex, parity: str, cutoff: int) -> PureTarget:
    """
    target_cat returns the even or odd cat state proportional to |alpha> +- |-alpha>.

    Parameters
    ----------
    alpha : complex
        coherent amplitude
    parity : str
        ``"even"`` for |alpha> + |-alpha>, ``"odd"`` for |alpha> - |-alpha>
    cutoff : int
        truncation d

    Returns
    -------
    PureTarget
        the renormalized truncated cat; as alpha -> 0 the even cat tends to |0>
        and the odd cat to |1>
    """
    _check_cutoff(cutoff, 1 if parity == "even" else 2)
    if parity not in CAT_PARITIES:
        raise InvalidParameterException(f"parity must be one of {CAT_PARITIES}, got {parity!r}")
    offset = 0 if parity == "even" else 1
    if alpha == 0:
        return target_fock(offset, cutoff)

    amplitudes = coherent_amplitudes(alpha, cutoff)
    amplitudes[1 - offset :: 2] = 0.0
    norm_squared = float(np.sum(np.abs(amplitudes) ** 2))
    # norm^2 of the kept parity: (1 +- exp(-2|alpha|^2)) / 2
    exact = 0.5 * (1.0 + np.exp(-2.0 * abs(alpha) ** 2)) if offset == 0 else (
        -0.5 * np.expm1(-2.0 * abs(alpha) ** 2)
    )
    truncation_loss = max(0.0, 1.0 - norm_squared / exact)
    if truncation_loss > TRUNCATION_TOL:
        logging.warning(
            f"{parity} cat with alpha={alpha} loses {truncation_loss:.2e} of its norm "
            f"at cutoff {cutoff}"
        )
    return PureTarget(cutoff, amplitudes / math.sqrt(norm_squared), truncation_loss)


def target_psia(a: float, cutoff: int) -> PureTarget:
    """
    target_psia returns the weak cubic-phase state.

    psi_a = (|0> + i a sqrt(3/2) |1> + i a |3>) / sqrt(1 + 5 a^2 / 2).
    """
    _check_cutoff(cutoff, 4)
    amplitudes = np.zeros(cutoff, dtype=complex)
    amplitudes[0] = 1.0
    amplitudes[1] = 1j * a * math.sqrt(1.5)
    amplitudes[3] = 1j * a
    return PureTarget(cutoff, amplitudes / math.sqrt(1.0 + 2.5 * a**2))

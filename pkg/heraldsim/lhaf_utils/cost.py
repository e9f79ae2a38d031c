"""
Operation-count estimators for Fock matrix elements of Gaussian states.

Three methods are compared for an element <m|rho|n> of an l-mode state:

- the repeated-index loop hafnian (``op_count_mixed``),
- a generic loop hafnian of the expanded D x D matrix (``op_count_generic``),
- a truncated Fock basis simulation with cutoff d (``op_count_fock``),

plus the corresponding counts for amplitudes <n|psi> of pure states
(``op_count_pure``). The generic and Fock counts are big-O expressions
evaluated literally without constants; they are order-of-magnitude
comparators, not cycle counts.
"""

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from heraldsim.exceptions import InvalidParameterException

PURE_VARIANTS = ("tailored", "generic", "fock")

# legend printed under the text cost table
COST_LEGEND = (
    "G = geometric_mean and A = arithmetic_mean of the numbers 1 + n_s (and 1 + m_s); "
    "the fock row uses the cutoff d for both.\n"
    "generic_base = sqrt(2)^(A - 1), the exponential base of the generic loop hafnian; "
    "NaN for the fock row."
)


@dataclass(frozen=True)
class CostEstimate:
    """
    Operation count of one method together with the means it depends on.

    Attributes
    ----------
    steps : int
        exact operation count
    geometric_mean : float
        G, the geometric mean of the numbers 1 + n_s (and 1 + m_s)
    arithmetic_mean : float
        A, the arithmetic mean of the same numbers
    generic_base : float
        sqrt(2)^(A - 1), the base of the exponential growth of the generic
        method; NaN for the truncated Fock count, whose means are the cutoff
    big_o_form : float
        the count rewritten in terms of l, A and G
    """

    steps: int
    geometric_mean: float
    arithmetic_mean: float
    generic_base: float
    big_o_form: float


def _counts(values: Sequence[int], name: str) -> Tuple[int, ...]:
    counts = tuple(int(v) for v in values)
    if any(c < 0 for c in counts):
        raise InvalidParameterException(f"{name} must be nonnegative, got {counts}")
    return counts


def _mixed_counts(n: Sequence[int], m: Sequence[int]) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    n, m = _counts(n, "n"), _counts(m, "m")
    if len(n) != len(m):
        raise InvalidParameterException(f"n and m differ in length: {len(n)} != {len(m)}")
    if not n:
        raise InvalidParameterException("n and m must describe at least one mode")
    return n, m


def _means(occupations: Sequence[int]) -> Tuple[float, float]:
    """Geometric and arithmetic mean of ``1 + k`` over ``occupations``."""
    shifted = np.asarray(occupations, dtype=float) + 1.0
    geometric = float(np.exp(np.mean(np.log(shifted))))
    arithmetic = float(np.mean(shifted))
    return geometric, arithmetic


def _estimate(steps: int, occupations: Sequence[int], big_o_form: float) -> CostEstimate:
    geometric, arithmetic = _means(occupations)
    return CostEstimate(
        steps=steps,
        geometric_mean=geometric,
        arithmetic_mean=arithmetic,
        generic_base=math.sqrt(2.0) ** (arithmetic - 1.0),
        big_o_form=big_o_form,
    )


def op_count_mixed(n: Sequence[int], m: Sequence[int]) -> CostEstimate:
    """
    op_count_mixed counts the steps of the repeated-index loop hafnian.

    t = [prod (1 + n_s)(1 + m_s)] [1 + sum (n_s + m_s) / 2], evaluated as
    P (2 + S) // 2, which is exact because P is even whenever S is odd.

    Parameters
    ----------
    n, m : Sequence[int]
        photon numbers of the ket and bra of each mode

    Returns
    -------
    CostEstimate
        t with G and A over the 2l numbers {1 + n_s, 1 + m_s}

    Examples
    --------
    >>> op_count_mixed((1, 1, 1), (1, 1, 1)).steps
    256
    """
    n, m = _mixed_counts(n, m)
    ell = len(n)
    product = math.prod(1 + k for k in n + m)
    total = sum(n + m)
    steps = product * (2 + total) // 2
    geometric, arithmetic = _means(n + m)
    big_o_form = (ell * (arithmetic - 1.0) + 1.0) * geometric ** (2 * ell)
    return _estimate(steps, n + m, big_o_form)


def op_count_generic(n: Sequence[int], m: Sequence[int]) -> CostEstimate:
    """
    op_count_generic counts D^3 2^(D/2) for a generic loop hafnian of size D.

    D = sum (n_s + m_s). The count is floor(sqrt(D^6 2^D)) so that odd D stays
    in integer arithmetic; D = 0 gives 0. ``big_o_form`` holds the same growth
    written as (l A)^3 (sqrt(2)^(A - 1))^(2 l).
    """
    n, m = _mixed_counts(n, m)
    ell = len(n)
    dim = sum(n + m)
    steps = math.isqrt(dim**6 * 2**dim)
    _, arithmetic = _means(n + m)
    big_o_form = (ell * arithmetic) ** 3 * (math.sqrt(2.0) ** (arithmetic - 1.0)) ** (2 * ell)
    return _estimate(steps, n + m, big_o_form)


def op_count_fock(num_modes: int, cutoff: int) -> CostEstimate:
    """
    op_count_fock counts l^2 d^4 d^(2l) for a truncated Fock simulation.

    The geometric and arithmetic means are both reported as the cutoff d,
    which is the base of the exponential growth of this method. There is no
    generic base for a cutoff, so ``generic_base`` is NaN.
    """
    if num_modes < 1 or cutoff < 1:
        raise InvalidParameterException(
            f"num_modes and cutoff must be positive, got {num_modes} and {cutoff}"
        )
    steps = num_modes**2 * cutoff ** (4 + 2 * num_modes)
    return CostEstimate(
        steps=steps,
        geometric_mean=float(cutoff),
        arithmetic_mean=float(cutoff),
        generic_base=math.nan,
        big_o_form=float(steps),
    )


def op_count_pure(
    n: Sequence[int], variant: str = "tailored", cutoff: Optional[int] = None
) -> CostEstimate:
    """
    op_count_pure counts the steps for an amplitude <n|psi> of a pure state.

    Parameters
    ----------
    n : Sequence[int]
        photon numbers of each mode
    variant : str, optional
        ``"tailored"`` for l A_p G_p^l, ``"generic"`` for
        (l A_p)^3 sqrt(2)^(l (A_p - 1)) and ``"fock"`` for l^2 d^2 d^l,
        by default "tailored"
    cutoff : Optional[int], optional
        the cutoff d, required for the ``fock`` variant, by default None

    Returns
    -------
    CostEstimate
        the count with G_p and A_p over the numbers 1 + n_s
    """
    n = _counts(n, "n")
    if not n:
        raise InvalidParameterException("n must describe at least one mode")
    if variant not in PURE_VARIANTS:
        raise InvalidParameterException(
            f"variant must be one of {PURE_VARIANTS}, got {variant!r}"
        )
    ell = len(n)
    geometric, arithmetic = _means(n)
    shifted_sum = sum(1 + k for k in n)
    if variant == "tailored":
        steps = shifted_sum * math.prod(1 + k for k in n)
        big_o_form = ell * arithmetic * geometric**ell
    elif variant == "generic":
        steps = math.isqrt(shifted_sum**6 * 2 ** sum(n))
        big_o_form = (ell * arithmetic) ** 3 * math.sqrt(2.0) ** (ell * (arithmetic - 1.0))
    else:
        if cutoff is None or cutoff < 1:
            raise InvalidParameterException("the fock variant needs a positive cutoff")
        steps = ell**2 * cutoff ** (2 + ell)
        big_o_form = float(steps)
    return _estimate(steps, n, big_o_form)


def cost_table(n: Sequence[int], m: Sequence[int], cutoff: int) -> pd.DataFrame:
    """
    cost_table compares every estimator for one Fock element.

    Parameters
    ----------
    n, m : Sequence[int]
        photon numbers of the ket and bra of each mode
    cutoff : int
        the cutoff d of the truncated Fock methods

    Returns
    -------
    pd.DataFrame
        one row per method with the CostEstimate fields as columns; the pure
        rows use ``n`` only
    """
    n, m = _mixed_counts(n, m)
    estimates = {
        "tailored": op_count_mixed(n, m),
        "generic": op_count_generic(n, m),
        "fock": op_count_fock(len(n), cutoff),
        "tailored_pure": op_count_pure(n, "tailored"),
        "generic_pure": op_count_pure(n, "generic"),
        "fock_pure": op_count_pure(n, "fock", cutoff),
    }
    rows = [
        {
            "method": method,
            "steps": estimate.steps,
            "geometric_mean": estimate.geometric_mean,
            "arithmetic_mean": estimate.arithmetic_mean,
            "generic_base": estimate.generic_base,
        }
        for method, estimate in estimates.items()
    ]
    return pd.DataFrame(rows).set_index("method")

"""
Exact loop hafnians.

Two evaluators are provided:

- ``lhaf_spm`` sums over the single-pair matchings of a small symmetric matrix
  and serves as an oracle.
- ``lhaf_repeated`` evaluates the loop hafnian of a matrix whose rows and
  columns are repeated without expanding it. For a base matrix B, loop vector
  g and repetitions r with D = sum(r) it computes::

      sum_{0 <= nu <= r} (-1)^|nu| prod_s C(r_s, nu_s)
          sum_{j=0}^{D//2} (lam^T B lam / 2)^j (g^T lam)^(D-2j) / (j! (D-2j)!)

  with lam = r/2 - nu, which is the mixed derivative of exp(x^T B x / 2 + g^T x)
  at the origin written as a finite difference of its degree D part.
"""

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Sequence, Tuple

import numpy as np

from heraldsim.exceptions import InvalidParameterException

from . import (
    EXACT_BINOMIAL_LIMIT,
    EXTENDED_PRECISION_THRESHOLD,
    NU_CHUNK_SIZE,
    PRECISIONS,
    SYMMETRY_TOL,
)


def _check_symmetric(matrix: np.ndarray, name: str) -> np.ndarray:
    matrix = np.asarray(matrix, dtype=complex)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise InvalidParameterException(f"{name} must be square, got shape {matrix.shape}")
    if matrix.size and np.max(np.abs(matrix - matrix.T)) > SYMMETRY_TOL:
        raise InvalidParameterException(f"{name} is not symmetric")
    return matrix


@dataclass(frozen=True)
class LoopMatrixSpec:
    """
    Compressed description of a loop hafnian matrix with repeated indices.

    Attributes
    ----------
    base : np.ndarray
        complex symmetric N x N matrix; entry (s, t) couples copies of s and t,
        including distinct copies of the same index when s == t
    loops : np.ndarray
        complex loop weight of each index, length N
    reps : np.ndarray
        nonnegative repetition count of each index, length N
    """

    base: np.ndarray
    loops: np.ndarray
    reps: np.ndarray

    def __post_init__(self):
        """Validate shapes, symmetry and repetition counts."""
        base = _check_symmetric(self.base, "base")
        loops = np.asarray(self.loops, dtype=complex).reshape(-1)
        reps = np.asarray(self.reps).reshape(-1)
        if reps.size and not np.all(np.equal(np.mod(reps, 1), 0)):
            raise InvalidParameterException("repetition counts must be integers")
        reps = reps.astype(np.int64)
        if not base.shape[0] == loops.shape[0] == reps.shape[0]:
            raise InvalidParameterException(
                f"dimension mismatch: base {base.shape}, loops {loops.shape}, "
                f"reps {reps.shape}"
            )
        if np.any(reps < 0):
            raise InvalidParameterException("repetition counts must be nonnegative")
        for name, value in (("base", base), ("loops", loops), ("reps", reps)):
            value.setflags(write=False)
            object.__setattr__(self, name, value)

    @property
    def dimension(self) -> int:
        """Size D of the expanded matrix."""
        return int(self.reps.sum())

    def drop_empty(self) -> "LoopMatrixSpec":
        """Remove indices with zero repetitions."""
        keep = np.flatnonzero(self.reps)
        return LoopMatrixSpec(
            self.base[np.ix_(keep, keep)], self.loops[keep], self.reps[keep]
        )

    def expand(self) -> np.ndarray:
        """
        Build the expanded D x D matrix.

        Row and column s of ``base`` appear ``reps[s]`` times and the diagonal
        is replaced by the loop weights.
        """
        index = np.repeat(np.arange(self.reps.shape[0]), self.reps)
        expanded = np.array(self.base[np.ix_(index, index)])
        np.fill_diagonal(expanded, self.loops[index])
        return expanded


def lhaf_spm(matrix: np.ndarray) -> complex:
    """
    Loop hafnian as the sum over single-pair matchings.

    Each matching contributes the product of ``matrix[i, j]`` over its pairs and
    ``matrix[i, i]`` over its loops. Matchings are grouped by the block holding
    the smallest remaining index, so shared tails are summed once.

    Parameters
    ----------
    matrix : np.ndarray
        complex symmetric N x N matrix, intended for N up to about 16

    Returns
    -------
    complex
        the loop hafnian; 1 for the empty matrix

    Raises
    ------
    InvalidParameterException
        if the matrix is not square and symmetric
    """
    matrix = _check_symmetric(matrix, "matrix")
    size = matrix.shape[0]

    @lru_cache(maxsize=None)
    def _lhaf(mask: int) -> complex:
        if mask == 0:
            return 1.0 + 0.0j
        i = (mask & -mask).bit_length() - 1
        rest = mask & ~(1 << i)
        total = matrix[i, i] * _lhaf(rest)
        partners = rest
        while partners:
            j = (partners & -partners).bit_length() - 1
            total += matrix[i, j] * _lhaf(rest & ~(1 << j))
            partners &= partners - 1
        return total

    return complex(_lhaf((1 << size) - 1))


def _binomial_tables(reps: np.ndarray, real_dtype: type, exact: bool) -> List[np.ndarray]:
    tables = []
    for r in reps:
        r = int(r)
        if exact:
            row = np.array([float(math.comb(r, k)) for k in range(r + 1)])
            tables.append(row.astype(real_dtype))
        else:
            row = np.ones(r + 1, dtype=real_dtype)
            for k in range(1, r + 1):
                row[k] = row[k - 1] * real_dtype(r - k + 1) / real_dtype(k)
            tables.append(row)
    return tables


def _inverse_factorials(size: int, real_dtype: type) -> np.ndarray:
    table = np.ones(size + 1, dtype=real_dtype)
    for k in range(1, size + 1):
        table[k] = table[k - 1] / real_dtype(k)
    return table


def _use_extended(precision: str, total: int) -> bool:
    if precision not in PRECISIONS:
        raise InvalidParameterException(
            f"precision must be one of {PRECISIONS}, got {precision!r}"
        )
    if precision == "auto":
        return total > EXTENDED_PRECISION_THRESHOLD
    return precision == "extended"


def _fsum_long(values: np.ndarray) -> np.longdouble:
    # each long double is split exactly into a float64 head and a float64 tail
    head = values.astype(np.float64)
    tail = (values - head).astype(np.float64)
    parts = head.tolist() + tail.tolist()
    rounded = math.fsum(parts)
    residual = math.fsum(parts + [-rounded])
    return np.longdouble(rounded) + np.longdouble(residual)


def _accurate_sum(values: np.ndarray, extended: bool):
    """
    Compensated sum of complex terms.

    Double terms go through ``math.fsum``. Extended terms are summed exactly
    from their float64 head and tail parts and returned as a long double
    complex carrying the rounded sum plus its residual.
    """
    if extended:
        values = np.asarray(values, dtype=np.clongdouble)
        real = _fsum_long(np.real(values))
        imag = _fsum_long(np.imag(values))
        return np.clongdouble(real) + np.clongdouble(1j) * imag
    return complex(
        math.fsum(np.real(values).tolist()), math.fsum(np.imag(values).tolist())
    )


def lhaf_repeated(spec: LoopMatrixSpec, precision: str = "auto") -> complex:
    """
    Loop hafnian of the expanded matrix of ``spec`` without expanding it.

    See ``lhaf_repeated_steps`` for the parameters.
    """
    value, steps = lhaf_repeated_steps(spec, precision)
    logging.debug(f"Loop hafnian of dimension {spec.dimension} took {steps} (nu, j) steps")
    return value


def lhaf_repeated_steps(spec: LoopMatrixSpec, precision: str = "auto") -> Tuple[complex, int]:
    """
    Loop hafnian of the expanded matrix of ``spec`` and the work it took.

    Complementary vectors nu and r - nu give equal terms, so only half of the
    nu vectors are evaluated. Every evaluated (nu, j) term counts as one step.

    Parameters
    ----------
    spec : LoopMatrixSpec
        base matrix, loop weights and repetitions
    precision : str, optional
        ``"double"`` sums float64 terms with compensated summation,
        ``"extended"`` evaluates and accumulates in long double, ``"auto"``
        picks extended when the expanded dimension exceeds 30, by default "auto"

    Returns
    -------
    Tuple[complex, int]
        the loop hafnian, exactly 1 when every repetition is zero, and the
        number of (nu, j) terms evaluated
    """
    spec = spec.drop_empty()
    reps = spec.reps
    total = spec.dimension
    extended = _use_extended(precision, total)
    if total == 0:
        return 1.0 + 0.0j, 0

    real_dtype = np.longdouble if extended else np.float64
    complex_dtype = np.clongdouble if extended else np.complex128
    base = spec.base.astype(complex_dtype)
    loops = spec.loops.astype(complex_dtype)
    half_reps = reps.astype(real_dtype) / real_dtype(2)
    binomials = _binomial_tables(
        reps, real_dtype, exact=total <= EXACT_BINOMIAL_LIMIT and not extended
    )
    inv_fact = _inverse_factorials(total, real_dtype)
    num_pairs = total // 2
    coefficients = [inv_fact[j] * inv_fact[total - 2 * j] for j in range(num_pairs + 1)]

    dims = tuple(int(r) + 1 for r in reps)
    num_nu = math.prod(dims)
    half = num_nu // 2
    logging.debug(
        f"Kan sum over {num_nu} nu vectors for D={total} "
        f"({'extended' if extended else 'double'} precision)"
    )

    steps = 0

    def _terms(flat: np.ndarray) -> np.ndarray:
        nonlocal steps
        nu = np.stack(np.unravel_index(flat, dims), axis=1)
        weights = np.where(nu.sum(axis=1) % 2 == 0, real_dtype(1), real_dtype(-1))
        for s, table in enumerate(binomials):
            weights = weights * table[nu[:, s]]
        lam = half_reps[None, :] - nu.astype(real_dtype)
        quad = np.sum((lam @ base) * lam, axis=1) / real_dtype(2)
        lin = lam @ loops
        lin_sq = lin * lin
        acc = np.full(flat.shape[0], coefficients[0], dtype=complex_dtype)
        steps += flat.shape[0]
        quad_pow = np.ones(flat.shape[0], dtype=complex_dtype)
        for j in range(1, num_pairs + 1):
            quad_pow = quad_pow * quad
            acc = acc * lin_sq + coefficients[j] * quad_pow
            steps += flat.shape[0]
        if total % 2:
            acc = acc * lin
        return weights * acc

    partial_sums = []
    for start in range(0, half, NU_CHUNK_SIZE):
        flat = np.arange(start, min(start + NU_CHUNK_SIZE, half))
        partial_sums.append(_accurate_sum(_terms(flat), extended))
    paired = _accurate_sum(np.array(partial_sums, dtype=complex_dtype), extended)
    result = 2 * paired
    if num_nu % 2:
        result = result + _terms(np.array([half]))[0]
    return complex(result), steps


def hafnian_repeated(base: np.ndarray, reps: Sequence[int], precision: str = "auto") -> complex:
    """
    Hafnian of the expanded matrix, i.e. the loop hafnian with zero loops.

    Returns 0 when the expanded dimension is odd.
    """
    base = np.asarray(base, dtype=complex)
    spec = LoopMatrixSpec(base, np.zeros(base.shape[0], dtype=complex), reps)
    if spec.dimension % 2:
        return 0.0 + 0.0j
    return lhaf_repeated(spec, precision=precision)

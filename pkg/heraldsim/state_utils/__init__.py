"""Module for Gaussian state utilities of heraldsim."""

# vacuum covariance is VACUUM_VARIANCE * identity in the (a, a^dagger) ordering
VACUUM_VARIANCE = 0.5

tolerances = {
    "hermitian": 1e-10,
    "block_structure": 1e-10,
    "conjugate_pairing": 1e-10,
    "condition_number": 1e12,
}

"""Module for Fock basis extraction utilities of heraldsim."""

# heralding probabilities at or below this value are treated as exactly zero
ZERO_PROBABILITY = 1e-14

# smallest starting cutoff of the adaptive loop
MIN_CUTOFF = 4

# diagonal Fock elements may carry this much imaginary residue before a warning
IMAG_RESIDUE_TOL = 1e-10

# invariants of a normalized density matrix
density_tolerances = {
    "hermitian": 1e-9,
    "trace": 1e-9,
    "min_eigenvalue": -1e-8,
}

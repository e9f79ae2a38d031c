"""Module for figure-of-merit utilities of heraldsim."""

# targets whose truncated norm falls short of 1 by more than this are flagged
TRUNCATION_TOL = 1e-6

CAT_PARITIES = ("even", "odd")

# quadrature defaults of the Wigner logarithmic negativity
wln_defaults = {
    "n_pts": 401,
    "abs_tol": 2e-3,
    "growth": 1.5,
    "max_refinements": 4,
    "extent_scale": 3.5,
}

# smallest grid resolution accepted by the Wigner evaluation
MIN_GRID_POINTS = 16

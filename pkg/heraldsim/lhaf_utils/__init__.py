"""Module for loop hafnian utilities of heraldsim."""

# base matrices must be symmetric to this absolute tolerance
SYMMETRY_TOL = 1e-12

# total repetition count above which the nu-sum switches to extended precision
EXTENDED_PRECISION_THRESHOLD = 30

# largest total repetition count for which exact integer binomials are used
EXACT_BINOMIAL_LIMIT = 60

# number of nu vectors evaluated per chunk of the repeated-index sum
NU_CHUNK_SIZE = 1 << 15

PRECISIONS = ("auto", "double", "extended")

"""Module for heralding scheme utilities of heraldsim."""

import math

# operation type -> (number of modes, parameter names)
op_signatures = {
    "squeeze": (1, ("z",)),
    "two_mode_squeeze": (2, ("zeta",)),
    "beamsplitter": (2, ("theta", "phi")),
    "displace": (1, ("alpha",)),
    "loss": (1, ("eta",)),
}

# loss transmissions left open in a template, filled in by CircuitSpec.bind
ETA_PLACEHOLDERS = ("eta1", "eta2")

TARGET_KINDS = ("fock", "cat", "psia", "vacuum")

# targets are built on at least this many Fock levels
MIN_TARGET_CUTOFF = 40

# photon subtraction beamsplitter, cos(theta) = sqrt(0.97)
CAT_BS_THETA = math.acos(math.sqrt(0.97))

# fidelity-optimal cat amplitude for each number of subtracted photons at z = 0.5
cat_alpha_opt = {1: 1.24, 2: 1.33}

# weak cubic-phase state circuit, one entry per input mode
cubic_parameters = {
    "r": (0.71, 0.67, -0.42),
    "arg_z": (-2.07, 0.06, -3.79),
    "alpha": (-0.02, 0.34, 0.02),
    "theta": (-1.57, 0.68, 2.5),
    "phi": (0.53, -4.51, 0.72),
    "pattern": (1, 2),
    "a": 0.53,
}

# modes hit by the preparation loss eta2 (inputs) and the measurement loss eta1 (outputs)
CUBIC_LOSS_MODES = {"eta2": (1, 2), "eta1": (1, 2, 3)}

# beamsplitter mode pairs of the cubic-phase interferometer, in application order
CUBIC_MESHES = {
    "b12_b23_b12": ((1, 2), (2, 3), (1, 2)),
    "b12_b13_b23": ((1, 2), (1, 3), (2, 3)),
}

# default parameters of the named presets
preset_defaults = {
    "fock": {"r": 1.0, "m": 1},
    "cat": {"z": 0.5, "m": 1},
    "cubic": {"a": 0.53, "mesh": "b12_b23_b12"},
}

# column order of sweep tables
REPORT_COLUMNS = ["eta1", "eta2", "p", "F", "wln", "d_used", "seconds"]

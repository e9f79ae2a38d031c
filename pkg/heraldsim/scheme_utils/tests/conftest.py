"""Contains fixtures for tests for the scheme_utils module."""

from typing import List

import pytest

from heraldsim.scheme_utils import schemes


@pytest.fixture(scope="module")
def fock_template() -> schemes.CircuitSpec:
    """fock_template returns the Fock preset with both transmissions open."""
    return schemes.preset("fock")


@pytest.fixture(scope="module")
def vacuum_circuit() -> schemes.CircuitSpec:
    """vacuum_circuit returns two modes of vacuum heralded on zero photons."""
    return schemes.CircuitSpec(
        num_modes=2,
        ops=(),
        pattern=(0,),
        heralded_mode=2,
        target=schemes.TargetSpec("vacuum"),
        name="vacuum",
    )


@pytest.fixture(scope="module")
def reports() -> List[schemes.MeritReport]:
    """reports returns a hand-made 2 x 2 sweep table in row-major order."""
    return [
        schemes.MeritReport(0.5, 0.5, 0.1234567890123456, 0.5, 0.1, 4, 0.25),
        schemes.MeritReport(0.5, 1.0, 0.2, 0.6, 0.2, 5, 0.5),
        schemes.MeritReport(1.0, 0.5, 0.3, 0.7, 0.3, 6, 0.75),
        schemes.MeritReport(1.0, 1.0, 0.4, 0.8, 0.4, 7, 1.0),
    ]

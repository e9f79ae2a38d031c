"""Tests for the heraldsim.fock_utils module."""

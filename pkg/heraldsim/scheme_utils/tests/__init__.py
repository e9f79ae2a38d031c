"""Tests for the heraldsim.scheme_utils module."""

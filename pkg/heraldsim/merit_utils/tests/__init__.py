"""Tests for the heraldsim.merit_utils module."""

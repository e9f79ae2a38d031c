"""Tests for the heraldsim.state_utils module."""

"""Tests for the heraldsim.lhaf_utils module."""

"""Tests for the heraldsim.db_utils module."""

"""Unit test package for heraldsim."""

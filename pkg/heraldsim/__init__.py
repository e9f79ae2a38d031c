"""Top-level package for heraldsim."""

__author__ = """heraldsim developers"""
__version__ = "1.0.0"

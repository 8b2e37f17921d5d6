"""Solvable primitive permutation groups of small rank."""

__version__ = "0.1.0"

"""Exact computations for A-hypergeometric (GKZ) systems."""

__version__ = "0.1.0"

"""Workbench for Lie triple systems, symmetric pairs, and kernel lattices."""

from triplekit.numerics import TolerancePolicy, DEFAULT_TOLERANCE, RATIONAL, FLOAT

__version__ = "0.1.0"

__all__ = ["TolerancePolicy", "DEFAULT_TOLERANCE", "RATIONAL", "FLOAT", "__version__"]

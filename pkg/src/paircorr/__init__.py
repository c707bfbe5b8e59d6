"""Explicit constants and bounds for the pair correlation of zeta zeros."""

__version__ = "0.1.0"

"""Numerical verification of bound entangled states with nonzero distillable key."""

__version__ = "0.1.0"

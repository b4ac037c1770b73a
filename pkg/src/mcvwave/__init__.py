"""Travelling waves and solitons of a hyperbolic heat-conduction model with
temperature-dependent conductivity and relaxation time."""

__version__ = "0.1.0"

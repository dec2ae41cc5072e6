"""Spectral solver and diagnostics for the Peskin problem in two dimensions."""

__version__ = "0.1.0"

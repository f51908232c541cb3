"""Symbolic-numeric toolkit for linear control system transfer functions."""

__version__ = "0.1.0"

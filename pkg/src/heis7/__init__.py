"""Verification toolkit for level-7 Heisenberg invariant geometry in P^6."""

__version__ = "0.1.0"

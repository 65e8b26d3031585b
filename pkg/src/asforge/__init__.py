"""Curves with many points from Artin-Schreier fibre products."""

__version__ = "0.1.0"

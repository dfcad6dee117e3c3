"""Exact canonicalization, cataloguing and approximation of H/T circuits."""

__version__ = "0.1.0"

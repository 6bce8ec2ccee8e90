"""Covering bounds for families of perfect matchings, with exact arithmetic
and brute-force / randomized verification harnesses."""

__version__ = "0.1.0"

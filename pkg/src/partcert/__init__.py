"""Certified arithmetic for the partition function p(n)."""

__version__ = "0.1.0"

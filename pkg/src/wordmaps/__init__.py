"""Certified surjectivity of word maps on SU(n)."""

__version__ = "0.1.0"

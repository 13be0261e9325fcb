"""Exact K-theoretic degeneracy loci computations."""

__version__ = "0.1.0"

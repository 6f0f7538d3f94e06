"""Algorithmic services: braids, free groups, Laurent matrices, spectral growth and bounds."""

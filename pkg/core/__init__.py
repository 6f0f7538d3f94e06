"""Core utilities for the braid dilatation toolkit."""

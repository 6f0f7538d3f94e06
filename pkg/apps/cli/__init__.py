"""Command-line interface for braid dilatation bounds."""

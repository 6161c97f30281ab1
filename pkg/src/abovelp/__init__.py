"""Exact vertex cover above the LP lower bound, and problems that reduce to it."""

__version__ = "0.1.0"

"""Optimal split of cellular users between a licensed band and a TV white-space band."""

__version__ = "0.1.0"

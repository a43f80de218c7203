"""Signed ego networks from directed interaction logs."""

__version__ = "0.1.0"

"""Exact open-closed BV algebra engine."""

__version__ = "0.1.0"

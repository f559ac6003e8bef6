"""Cybersecurity Maturity Assessment Framework toolkit."""

__version__ = "0.1.0"

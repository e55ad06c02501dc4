"""Proof checking and Dialectica program extraction for negative arithmetic."""

__version__ = "0.1.0"

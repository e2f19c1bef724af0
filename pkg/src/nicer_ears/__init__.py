"""Ear-decomposition approximation algorithms with certified lower bounds."""

__version__ = "0.1.0"

"""Exact tools for 2-, 3-, 4- and 12-congruences of elliptic curves over Q."""

__version__ = "0.1.0"

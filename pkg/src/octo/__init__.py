"""Operational theory of eight-port homodyne detection, evaluated numerically."""

__version__ = "0.1.0"

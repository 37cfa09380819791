"""Bit-accurate model of a four-corner ALGAS3 landing-assistance processor."""

__version__ = "0.1.0"

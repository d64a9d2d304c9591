"""Ternary lattices from Eichler orders, genus-averaged representation numbers
and normalized Heegner degrees, all in exact arithmetic."""

__version__ = "0.1.0"

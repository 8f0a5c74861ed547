"""Desk-scale verification toolkit for heights on torsion fields of elliptic curves."""
__version__ = "0.1.0"

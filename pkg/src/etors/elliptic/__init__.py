"""Elliptic curves in short Weierstrass form over Q and F_p."""
from .curves import (INFINITY, BadReduction, CurveFp, CurveQ, HasseViolation, Point, PointFp, PointQ,
                     PrimeTooLarge, PrimeTooSmall, ap_of, count_points, curve_new, naive_point_count, reduce_mod,
                     trace_q)
from .divpoly import DivisionIndexOutOfRange, division_polynomial, f_poly, psi_values
from .torsion import TorsionFieldError, TorsionFieldHandle, sample_field_elements, torsion_field

__all__ = [
    "INFINITY", "BadReduction", "CurveFp", "CurveQ", "DivisionIndexOutOfRange", "HasseViolation", "Point",
    "PointFp", "PointQ", "PrimeTooLarge", "PrimeTooSmall", "TorsionFieldError", "TorsionFieldHandle", "ap_of",
    "count_points", "curve_new", "division_polynomial", "f_poly", "naive_point_count", "psi_values",
    "reduce_mod", "sample_field_elements", "torsion_field", "trace_q",
]

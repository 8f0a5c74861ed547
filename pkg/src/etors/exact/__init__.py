"""Exact arithmetic: rationals, polynomials, number fields, finite fields."""
from fractions import Fraction as BigRational

from .factor import DegreeCapExceeded, factor, is_irreducible
from .finitefield import FqElement
from .numberfield import NFElement, NumberField, nf_min_poly
from .poly import Polynomial, cyclotomic, discriminant, resultant
from .roots import ComplexBall, RootPrecisionError, complex_roots

__all__ = [
    "BigRational", "ComplexBall", "DegreeCapExceeded", "FqElement", "NFElement", "NumberField",
    "Polynomial", "RootPrecisionError", "complex_roots", "cyclotomic", "discriminant", "factor",
    "is_irreducible", "nf_min_poly", "resultant",
]

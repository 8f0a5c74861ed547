"""Truncated p-adic arithmetic in unramified extensions and formal groups of elliptic curves."""
from .formal import (MAX_PREC, FormalGroup, FormalSeries, LubinTateReport, NotSupersingular, TruncationTooSmall,
                     cyclotomic_valuation, formal_exp, formal_group, formal_log, lubin_tate_signature, mul_via_log,
                     w_series)
from .metric import Metric2Result, Metric2Scan, check_metric2, check_metric2_element, metric2_scan
from .unramified import (DEFAULT_PRECISION, BelowPrecision, HenselFailure, UnramifiedElement, UnramifiedRing,
                         defining_polynomial, frobenius, sqrt_unit, teichmuller, valuation)

__all__ = [
    "DEFAULT_PRECISION", "MAX_PREC", "BelowPrecision", "FormalGroup", "FormalSeries", "HenselFailure",
    "LubinTateReport", "Metric2Result", "Metric2Scan", "NotSupersingular", "TruncationTooSmall",
    "UnramifiedElement", "UnramifiedRing", "check_metric2", "check_metric2_element", "cyclotomic_valuation",
    "defining_polynomial", "formal_exp", "formal_group", "formal_log", "frobenius", "lubin_tate_signature",
    "metric2_scan", "mul_via_log", "sqrt_unit", "teichmuller", "valuation", "w_series",
]

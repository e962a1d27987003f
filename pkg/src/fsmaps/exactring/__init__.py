from .local import EXACT, LocalSeries, local_compose, local_compose_invert, local_invert
from .poly import MPoly, Poly, is_zero, poly_xgcd, ring_inverse
from .quotient import QuotElem, QuotRing, quot_invert, trace_sum
from .rational import ONE, ZERO, Rational, as_rational, fmt_rational, rational_sqrt
from .series import TruncatedSeries, series_invert, series_sqrt

__all__ = [
    "EXACT", "LocalSeries", "local_compose", "local_compose_invert", "local_invert",
    "MPoly", "Poly", "is_zero", "poly_xgcd", "ring_inverse",
    "QuotElem", "QuotRing", "quot_invert", "trace_sum",
    "ONE", "ZERO", "Rational", "as_rational", "fmt_rational", "rational_sqrt",
    "TruncatedSeries", "series_invert", "series_sqrt",
]

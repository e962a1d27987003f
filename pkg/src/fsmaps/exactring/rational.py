"""Arbitrary precision rationals (gmpy2.mpq) and their text form."""
from gmpy2 import mpq

Rational = mpq
ZERO = mpq(0)
ONE = mpq(1)


def as_rational(x):
    """Coerce ints, mpq, Fractions and "p/q" strings to mpq."""
    if isinstance(x, str):
        s = x.strip()
        if "/" in s:
            p, q = s.split("/", 1)
            p, q = int(p), int(q)
            if q == 0:
                raise ValueError(f"zero denominator in {x!r}")
            return mpq(p, q)
        return mpq(int(s))
    if hasattr(x, "numerator") and hasattr(x, "denominator"):
        return mpq(int(x.numerator), int(x.denominator))
    return mpq(x)


def fmt_rational(q):
    q = mpq(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def rational_sqrt(q):
    """Exact square root of a nonnegative rational, or None."""
    from gmpy2 import is_square, isqrt

    q = mpq(q)
    if q < 0:
        return None
    p, d = q.numerator, q.denominator
    if not (is_square(p) and is_square(d)):
        return None
    return mpq(isqrt(p), isqrt(d))

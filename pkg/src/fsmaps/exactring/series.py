"""Truncated Laurent series in beta = alpha**(-1/2) with rational coefficients.

A series stores the coefficients of ``beta**val, beta**(val+1), ...`` up to,
but excluding, the absolute precision ``prec``.  ``prec=None`` marks an exact
series (finitely many nonzero terms, nothing unknown).  Every operation
returns the tightest precision it can justify, so precision loss from
Laurent division shows up in the result rather than silently.
"""
from gmpy2 import mpq

from ..errors import NonSquareLeading, NotInvertible, PrecisionError
from .rational import as_rational, fmt_rational, rational_sqrt

_Z = mpq(0)


def _min_prec(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


class TruncatedSeries:
    __slots__ = ("val", "coeffs", "prec")

    def __init__(self, coeffs=(), val=0, prec=None):
        cs = [c if type(c) is type(_Z) else as_rational(c) for c in coeffs]
        if prec is not None:
            keep = prec - val
            if keep < len(cs):
                cs = cs[: max(keep, 0)]
        i = 0
        while i < len(cs) and not cs[i]:
            i += 1
        val += i
        cs = cs[i:]
        if prec is None:
            while cs and not cs[-1]:
                cs.pop()
            if not cs:
                val = 0
        elif not cs:
            val = prec
        elif val > prec:
            val = prec
        self.val = val
        self.coeffs = tuple(cs)
        self.prec = prec

    @classmethod
    def _raw(cls, cs, val, prec):
        # cs: a list of mpq owned by the caller; skips coercion, still normalises
        if prec is not None and prec - val < len(cs):
            del cs[max(prec - val, 0):]
        i = 0
        n = len(cs)
        while i < n and not cs[i]:
            i += 1
        if i:
            val += i
            del cs[:i]
        if prec is None:
            while cs and not cs[-1]:
                cs.pop()
            if not cs:
                val = 0
        elif not cs:
            val = prec
        elif val > prec:
            val = prec
        self = object.__new__(cls)
        self.val = val
        self.coeffs = tuple(cs)
        self.prec = prec
        return self

    # ---- constructors -------------------------------------------------
    @classmethod
    def constant(cls, c):
        return cls((as_rational(c),), 0, None)

    @classmethod
    def monomial(cls, c, k):
        return cls((as_rational(c),), k, None)

    @classmethod
    def zero(cls, prec=None):
        return cls((), 0 if prec is None else prec, prec)

    # ---- inspection ---------------------------------------------------
    def is_exact(self):
        return self.prec is None

    def is_zero(self):
        return not self.coeffs

    def is_exact_zero(self):
        return not self.coeffs and self.prec is None

    @property
    def valuation(self):
        return self.val

    def coeff(self, k):
        if self.prec is not None and k >= self.prec:
            raise PrecisionError(f"coefficient of b^{k} unknown (precision {self.prec})")
        i = k - self.val
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return _Z

    def items(self):
        """(exponent, coefficient) pairs of the nonzero known terms."""
        return [(self.val + i, c) for i, c in enumerate(self.coeffs) if c]

    def leading(self):
        if not self.coeffs:
            raise PrecisionError("series is zero to its known precision")
        return self.coeffs[0]

    def truncate(self, prec):
        if prec is None:
            return self
        if self.prec is not None and self.prec <= prec:
            return self
        return TruncatedSeries._raw(list(self.coeffs[: max(prec - self.val, 0)]), self.val, prec)

    def shift(self, k):
        """Multiply by beta**k."""
        out = object.__new__(TruncatedSeries)
        out.coeffs = self.coeffs
        out.val = self.val + k if self.coeffs or self.prec is not None else 0
        out.prec = None if self.prec is None else self.prec + k
        return out

    def only_even_powers(self):
        return all(e % 2 == 0 for e, _ in self.items())

    # ---- arithmetic ---------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, TruncatedSeries):
            return other
        if isinstance(other, (int, type(_Z))):
            return TruncatedSeries.constant(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        prec = _min_prec(self.prec, o.prec)
        if not self.coeffs:
            return o.truncate(prec) if self.prec is not None else o
        if not o.coeffs:
            return self.truncate(prec) if o.prec is not None else self
        lo = min(self.val, o.val)
        hi = max(self.val + len(self.coeffs), o.val + len(o.coeffs))
        if prec is not None:
            hi = min(hi, prec)
        out = [_Z] * max(hi - lo, 0)
        for i, c in enumerate(self.coeffs):
            j = self.val + i - lo
            if j >= len(out):
                break
            out[j] = c
        for i, c in enumerate(o.coeffs):
            j = o.val + i - lo
            if j >= len(out):
                break
            out[j] = out[j] + c
        return TruncatedSeries._raw(out, lo, prec)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries._raw([-c for c in self.coeffs], self.val, self.prec)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def scale(self, q):
        q = as_rational(q)
        if not q:
            return TruncatedSeries.zero(None) if self.prec is None else TruncatedSeries.zero(self.prec)
        return TruncatedSeries._raw([c * q for c in self.coeffs], self.val, self.prec)

    def __mul__(self, other):
        if isinstance(other, (int, type(_Z))):
            return self.scale(other)
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        if not (self.coeffs or self.prec is not None) or not (other.coeffs or other.prec is not None):
            return _EXACT_ZERO
        va, vb = self.val, other.val
        prec = _min_prec(None if self.prec is None else self.prec + vb,
                         None if other.prec is None else other.prec + va)
        A, B = self.coeffs, other.coeffs
        val = va + vb
        n = len(A) + len(B) - 1
        if prec is not None:
            n = min(n, prec - val)
        if n <= 0:
            return TruncatedSeries._raw([], prec, prec)
        la, lb = len(A), len(B)
        out = []
        for k in range(n):
            lo = k - lb + 1 if k >= lb else 0
            hi = k if k < la else la - 1
            out.append(mpq(sum(A[i] * B[k - i] for i in range(lo, hi + 1))) if lo <= hi else _Z)
        return TruncatedSeries._raw(out, val, prec)

    __rmul__ = __mul__

    def invert(self, laurent=False, prec=None):
        """Multiplicative inverse.

        Outside Laurent mode the series must have a nonzero constant term.
        ``prec`` bounds the result for exact (polynomial) inputs, whose
        inverses are otherwise infinite.
        """
        if not self.coeffs:
            raise NotInvertible("series is zero to its known precision")
        v = self.val
        if v != 0 and not laurent:
            raise NotInvertible(f"series has valuation {v}; invertible only in Laurent mode")
        if self.prec is None and len(self.coeffs) == 1:
            return TruncatedSeries((1 / self.coeffs[0],), -v, None)
        if self.prec is None:
            if prec is None:
                raise PrecisionError("inverting an exact non-monomial series needs an explicit precision")
            out_prec = prec
        else:
            out_prec = self.prec - 2 * v
            if prec is not None:
                out_prec = min(out_prec, prec)
        n = out_prec + v
        A = self.coeffs
        inv0 = 1 / A[0]
        b = []
        for k in range(n):
            if k == 0:
                b.append(inv0)
                continue
            s = _Z
            for i in range(1, min(k, len(A) - 1) + 1):
                s += A[i] * b[k - i]
            b.append(-s * inv0)
        return TruncatedSeries(b, -v, out_prec)

    def __truediv__(self, other):
        if isinstance(other, (int, type(_Z))):
            return self.scale(1 / as_rational(other))
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self * other.invert(laurent=True)

    def sqrt(self, prec=None):
        """Square root with positive leading coefficient."""
        if not self.coeffs:
            raise NonSquareLeading("zero series")
        v = self.val
        if v % 2:
            raise NonSquareLeading(f"odd valuation {v}")
        r0 = rational_sqrt(self.coeffs[0])
        if r0 is None:
            raise NonSquareLeading(f"leading coefficient {fmt_rational(self.coeffs[0])} is not a rational square")
        if self.prec is None:
            if len(self.coeffs) == 1:
                return TruncatedSeries((r0,), v // 2, None)
            if prec is None:
                raise PrecisionError("square root of an exact non-monomial series needs an explicit precision")
            out_prec = prec
        else:
            out_prec = v // 2 + (self.prec - v)
            if prec is not None:
                out_prec = min(out_prec, prec)
        n = out_prec - v // 2
        A = self.coeffs
        g = [r0]
        inv2 = 1 / (2 * r0)
        for k in range(1, n):
            s = A[k] if k < len(A) else _Z
            for i in range(1, k):
                s -= g[i] * g[k - i]
            g.append(s * inv2)
        return TruncatedSeries(g, v // 2, out_prec)

    def __pow__(self, k):
        if k < 0:
            return self.invert(laurent=True) ** (-k)
        out = TruncatedSeries.constant(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    # ---- comparison ---------------------------------------------------
    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self - o).is_zero()

    def __hash__(self):
        raise TypeError("TruncatedSeries is unhashable")

    def identical(self, other):
        """Same coefficients and same precision window."""
        return self.val == other.val and self.coeffs == other.coeffs and self.prec == other.prec

    # ---- text ---------------------------------------------------------
    def to_dict(self):
        return {str(e): fmt_rational(c) for e, c in self.items()}

    @classmethod
    def from_dict(cls, d, prec=None):
        if not d:
            return cls.zero(prec)
        items = {int(k): as_rational(v) for k, v in d.items()}
        lo, hi = min(items), max(items)
        return cls([items.get(e, _Z) for e in range(lo, hi + 1)], lo, prec)

    def __str__(self):
        terms = [f"{fmt_rational(c)}*b^{e}" for e, c in self.items()]
        body = " + ".join(terms) if terms else "0"
        if self.prec is not None:
            body += f" + O(b^{self.prec})"
        return body

    __repr__ = __str__


def series_invert(s, laurent=False, prec=None):
    return s.invert(laurent=laurent, prec=prec)


def series_sqrt(s, prec=None):
    return s.sqrt(prec=prec)


def beta_series(coeffs, prec=None):
    """Convenience: power series from a coefficient list starting at beta**0."""
    return TruncatedSeries(coeffs, 0, prec)


_EXACT_ZERO = TruncatedSeries()

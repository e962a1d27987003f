"""Dense univariate and sparse multivariate polynomials over a duck-typed ring.

Coefficients may be rationals, TruncatedSeries or quotient-ring elements;
anything supporting ``+ - *`` works.  Only exact zeros are stripped from the
top of a univariate polynomial, so a coefficient that is merely zero to its
known precision keeps its slot.
"""
from gmpy2 import mpq

from ..errors import NotInvertible
from .series import TruncatedSeries

_MPQ = type(mpq(0))


def is_zero(x):
    if isinstance(x, (int, _MPQ)):
        return x == 0
    return x.is_zero()


def is_exact_zero(x):
    if isinstance(x, (int, _MPQ)):
        return x == 0
    f = getattr(x, "is_exact_zero", None)
    return f() if f is not None else x.is_zero()


def ring_inverse(x):
    """Inverse of a coefficient, allowing Laurent inversion of series."""
    if isinstance(x, (int, _MPQ)):
        if x == 0:
            raise NotInvertible("zero coefficient")
        return 1 / mpq(x)
    if isinstance(x, TruncatedSeries):
        return x.invert(laurent=True)
    return x.invert()


class Poly:
    """Dense polynomial; ``coeffs[i]`` multiplies ``var**i``."""

    __slots__ = ("coeffs", "var")

    def __init__(self, coeffs, var="x"):
        cs = list(coeffs)
        while cs and is_exact_zero(cs[-1]):
            cs.pop()
        self.coeffs = tuple(cs)
        self.var = var

    @property
    def degree(self):
        # -1 is the sentinel for the zero polynomial
        return len(self.coeffs) - 1

    def is_zero(self):
        return all(is_zero(c) for c in self.coeffs)

    def is_exact_zero(self):
        return not self.coeffs

    def lead(self):
        return self.coeffs[-1]

    def coeff(self, i):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def _new(self, cs):
        return Poly(cs, self.var)

    def __add__(self, other):
        if not isinstance(other, Poly):
            return self + self._new([other])
        n = max(len(self.coeffs), len(other.coeffs))
        return self._new([_add(self.coeff(i), other.coeff(i)) for i in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return self._new([-c for c in self.coeffs])

    def __sub__(self, other):
        if not isinstance(other, Poly):
            other = self._new([other])
        return self + (-other)

    def __rsub__(self, other):
        return self._new([other]) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return self._new([c * other for c in self.coeffs])
        A, B = self.coeffs, other.coeffs
        if not A or not B:
            return self._new([])
        out = [None] * (len(A) + len(B) - 1)
        for i, a in enumerate(A):
            for j, b in enumerate(B):
                p = a * b
                out[i + j] = p if out[i + j] is None else out[i + j] + p
        return self._new(out)

    def __rmul__(self, other):
        return self._new([other * c for c in self.coeffs])

    def __pow__(self, k):
        out = self._new([1])
        for _ in range(k):
            out = out * self
        return out

    def __call__(self, x):
        """Horner evaluation; ``x`` may be any ring element."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self):
        return self._new([c * i for i, c in enumerate(self.coeffs)][1:])

    def monic(self):
        inv = ring_inverse(self.lead())
        return self._new([c * inv for c in self.coeffs[:-1]] + [_one_like(self.lead())])

    def divmod(self, other):
        """Division by a polynomial whose leading coefficient is invertible."""
        if other.is_exact_zero():
            raise ZeroDivisionError("division by zero polynomial")
        inv = ring_inverse(other.lead())
        r = list(self.coeffs)
        dq = len(r) - len(other.coeffs)
        if dq < 0:
            return self._new([]), self
        q = [0] * (dq + 1)
        B = other.coeffs
        for k in range(dq, -1, -1):
            top = r[k + len(B) - 1]
            f = top * inv
            q[k] = f
            for i in range(len(B) - 1):
                r[k + i] = r[k + i] - f * B[i]
            r[k + len(B) - 1] = 0
        return self._new(q), self._new(r[: len(B) - 1])

    def __mod__(self, other):
        return self.divmod(other)[1]

    def strip_inexact(self):
        """Drop top coefficients that are zero to their known precision."""
        cs = list(self.coeffs)
        while cs and is_zero(cs[-1]):
            cs.pop()
        return self._new(cs)

    def __eq__(self, other):
        if not isinstance(other, Poly):
            other = self._new([other])
        return (self - other).is_zero()

    __hash__ = None

    def __str__(self):
        if not self.coeffs:
            return "0"
        return " + ".join(f"({c})*{self.var}^{i}" for i, c in enumerate(self.coeffs) if not is_exact_zero(c))

    __repr__ = __str__


def _add(a, b):
    if isinstance(a, int) and a == 0:
        return b
    if isinstance(b, int) and b == 0:
        return a
    return a + b


def _one_like(x):
    if isinstance(x, TruncatedSeries):
        return TruncatedSeries.constant(1)
    if isinstance(x, (int, _MPQ)):
        return mpq(1)
    return x * ring_inverse(x)


def poly_xgcd(a, b):
    """Extended Euclid: returns (g, s, t) with s*a + t*b = g, g monic.

    Remainders whose coefficients are zero to known precision are treated as
    zero, which is the only sensible reading for truncated coefficients.
    """
    r0, r1 = a.strip_inexact(), b.strip_inexact()
    one = Poly([1], a.var)
    s0, s1 = one, Poly([], a.var)
    t0, t1 = Poly([], a.var), one
    while not r1.is_exact_zero():
        q, r = r0.divmod(r1)
        r = r.strip_inexact()
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    inv = ring_inverse(r0.lead())
    return r0 * inv, s0 * inv, t0 * inv


class MPoly:
    """Sparse multivariate polynomial: {exponent tuple: coefficient}."""

    __slots__ = ("terms", "nvars")

    def __init__(self, terms, nvars):
        self.terms = {e: c for e, c in terms.items() if not is_exact_zero(c)}
        self.nvars = nvars

    @classmethod
    def constant(cls, c, nvars):
        return cls({(0,) * nvars: c}, nvars)

    @classmethod
    def variable(cls, i, nvars, coeff=1):
        e = [0] * nvars
        e[i] = 1
        return cls({tuple(e): coeff}, nvars)

    def is_zero(self):
        return all(is_zero(c) for c in self.terms.values())

    def is_exact_zero(self):
        return not self.terms

    def __add__(self, other):
        if not isinstance(other, MPoly):
            other = MPoly.constant(other, self.nvars)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out[e] + c if e in out else c
        return MPoly(out, self.nvars)

    __radd__ = __add__

    def __neg__(self):
        return MPoly({e: -c for e, c in self.terms.items()}, self.nvars)

    def __sub__(self, other):
        if not isinstance(other, MPoly):
            other = MPoly.constant(other, self.nvars)
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, MPoly):
            return MPoly({e: c * other for e, c in self.terms.items()}, self.nvars)
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                p = c1 * c2
                out[e] = out[e] + p if e in out else p
        return MPoly(out, self.nvars)

    def __rmul__(self, other):
        return MPoly({e: other * c for e, c in self.terms.items()}, self.nvars)

    def degree_in(self, i):
        return max((e[i] for e in self.terms), default=-1)

    def permute(self, perm):
        """Variable ``i`` of the result is variable ``perm[i]`` of ``self``."""
        return MPoly({tuple(e[p] for p in perm): c for e, c in self.terms.items()}, self.nvars)

    def as_univariate(self, i):
        """Split off variable ``i``: list indexed by its power of MPolys in the rest."""
        deg = self.degree_in(i)
        parts = [dict() for _ in range(deg + 1)]
        for e, c in self.terms.items():
            parts[e[i]][e[:i] + e[i + 1:]] = c
        return [MPoly(p, self.nvars - 1) for p in parts]

    def map_coeffs(self, f):
        return MPoly({e: f(c) for e, c in self.terms.items()}, self.nvars)

    def __eq__(self, other):
        if not isinstance(other, MPoly):
            other = MPoly.constant(other, self.nvars)
        return (self - other).is_zero()

    __hash__ = None

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"({c})*{e}" for e, c in sorted(self.terms.items()))

    __repr__ = __str__

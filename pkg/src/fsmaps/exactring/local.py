"""Truncated Laurent series in a local coordinate s over a generic coefficient ring.

``coeffs[i]`` multiplies ``s**(val + i)``; exponents ``>= prec`` are unknown.
Leading coefficients that only look zero are never dropped automatically
(over truncated coefficients "looks zero" is not "is zero"); callers who know
a leading term vanishes say so with :meth:`LocalSeries.drop_leading`.
"""
from ..errors import NonUnitLinearTerm, PrecisionError
from .poly import is_zero, ring_inverse

# precision marker for series that are exact polynomials in s
EXACT = 1 << 40


class LocalSeries:
    __slots__ = ("val", "coeffs", "prec", "zero", "point")

    def __init__(self, coeffs, val, prec, zero, point="s"):
        cs = list(coeffs)
        if len(cs) > prec - val:
            cs = cs[: max(prec - val, 0)]
        self.val = val
        self.coeffs = cs
        self.prec = prec
        self.zero = zero
        self.point = point

    @classmethod
    def from_poly(cls, coeffs, prec, zero, val=0, point="s"):
        return cls(coeffs, val, prec, zero, point)

    def _new(self, cs, val, prec):
        return LocalSeries(cs, val, prec, self.zero, self.point)

    def coeff(self, k):
        if k >= self.prec:
            raise PrecisionError(f"local coefficient s^{k} beyond known order {self.prec}")
        i = k - self.val
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return self.zero

    def truncate(self, prec):
        if prec >= self.prec:
            return self
        return self._new(self.coeffs, self.val, prec)

    def map(self, f):
        return self._new([f(c) for c in self.coeffs], self.val, self.prec)

    def drop_leading(self, k=1, check=True):
        """Remove ``k`` leading coefficients known (by the caller) to vanish."""
        if check:
            for c in self.coeffs[:k]:
                if not is_zero(c):
                    raise PrecisionError("dropped a nonvanishing leading coefficient")
        return self._new(self.coeffs[k:], self.val + k, self.prec)

    def shift(self, k):
        return self._new(self.coeffs, self.val + k, self.prec + k)

    def __add__(self, other):
        if not isinstance(other, LocalSeries):
            other = self._new([other], 0, EXACT)
        lo = min(self.val, other.val)
        prec = min(self.prec, other.prec)
        hi = max(self.val + len(self.coeffs), other.val + len(other.coeffs))
        n = max(min(prec, hi) - lo, 0)
        out = [self.zero] * n
        for s in (self, other):
            for i, c in enumerate(s.coeffs):
                j = s.val + i - lo
                if j >= n:
                    break
                out[j] = out[j] + c
        return self._new(out, lo, prec)

    __radd__ = __add__

    def __neg__(self):
        return self._new([-c for c in self.coeffs], self.val, self.prec)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        return self._new([x * c for x in self.coeffs], self.val, self.prec)

    def __mul__(self, other):
        if not isinstance(other, LocalSeries):
            return self.scale(other)
        val = self.val + other.val
        prec = min(self.prec + other.val, other.prec + self.val)
        A, B = self.coeffs, other.coeffs
        n = min(prec - val, len(A) + len(B) - 1)
        if n <= 0:
            return self._new([], val, prec)
        out = [None] * n
        for i, a in enumerate(A):
            if i >= n:
                break
            for j in range(min(len(B), n - i)):
                p = a * B[j]
                out[i + j] = p if out[i + j] is None else out[i + j] + p
        return self._new([self.zero if x is None else x for x in out], val, prec)

    def __rmul__(self, other):
        return self._new([other * x for x in self.coeffs], self.val, self.prec)

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        out = self._new([self.zero + 1], 0, EXACT)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def inverse(self):
        """Multiplicative inverse; the leading stored coefficient must be a unit."""
        if not self.coeffs:
            raise PrecisionError("cannot invert a series with no known terms")
        if self.prec >= EXACT // 2:
            raise PrecisionError("inverse of an exact polynomial needs a truncation first")
        inv0 = ring_inverse(self.coeffs[0])
        n = self.prec - self.val
        A = self.coeffs
        b = [inv0]
        for k in range(1, n):
            acc = None
            for i in range(1, min(k, len(A) - 1) + 1):
                p = A[i] * b[k - i]
                acc = p if acc is None else acc + p
            b.append(self.zero if acc is None else -(acc * inv0))
        return self._new(b, -self.val, self.prec - 2 * self.val)

    def derivative(self):
        cs = [c * (self.val + i) for i, c in enumerate(self.coeffs)]
        return self._new(cs, self.val - 1, self.prec - 1)

    def residue(self):
        return self.coeff(-1)

    def compose(self, g):
        """self(g(s)) for g of positive valuation."""
        if g.val < 1 or not g.coeffs:
            raise NonUnitLinearTerm("inner series must vanish at the expansion point")
        if not self.coeffs:
            return self._new([], self.prec * g.val, self.prec * g.val)
        poly = self._new([self.coeffs[-1]], 0, EXACT)
        for c in reversed(self.coeffs[:-1]):
            poly = poly * g + c
        if self.val >= 0:
            lead = g ** self.val
        else:
            lead = g.inverse() ** (-self.val)
        return (poly * lead).truncate(self.prec * g.val)

    def __str__(self):
        terms = [f"({c})*{self.point}^{self.val + i}" for i, c in enumerate(self.coeffs)]
        return " + ".join(terms + [f"O({self.point}^{self.prec})"])

    __repr__ = __str__


def local_compose(f, g):
    return f.compose(g)


def local_invert(f):
    """Compositional inverse h with f(h(s)) = s, for f = c1*s + ... with c1 a unit."""
    if f.val != 1 or not f.coeffs:
        raise NonUnitLinearTerm("series must start at the linear term")
    try:
        c1inv = ring_inverse(f.coeffs[0])
    except ArithmeticError as exc:
        raise NonUnitLinearTerm("linear coefficient is not a unit") from exc
    n = f.prec
    one = f.zero + 1
    ident = LocalSeries([one], 1, EXACT, f.zero, f.point)
    df = f.derivative()
    h = LocalSeries([c1inv], 1, EXACT, f.zero, f.point)
    cur = 2
    # Newton's method doubles the number of correct terms each round
    while cur < n:
        cur = min(2 * cur, n)
        err = f.compose(h) - ident
        corr = err * df.compose(h).inverse()
        h = (h - corr).truncate(cur)
        h = LocalSeries(h.coeffs, h.val, EXACT, f.zero, f.point)
    return h.truncate(n)


def local_compose_invert(f, mode="invert", g=None):
    if mode == "invert":
        return local_invert(f)
    if mode == "compose":
        if g is None:
            raise ValueError("compose needs an inner series")
        return f.compose(g)
    raise ValueError(f"unknown mode {mode!r}")

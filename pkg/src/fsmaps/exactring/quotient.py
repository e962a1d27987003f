"""Quotient rings K[u]/P(u) for a monic squarefree P, and traces over its roots.

One element of the quotient ring stands for the values of a polynomial at
all roots of ``P`` at once, so a sum over roots is a trace and never needs
the roots themselves.
"""
from gmpy2 import mpq

from ..errors import ConfigError, NotInvertible
from .poly import Poly, is_zero, poly_xgcd, ring_inverse
from .series import TruncatedSeries

_MPQ = type(mpq(0))


def _zero_like(x):
    return TruncatedSeries() if isinstance(x, TruncatedSeries) else mpq(0)


def _one_like(x):
    return TruncatedSeries.constant(1) if isinstance(x, TruncatedSeries) else mpq(1)


class QuotRing:
    def __init__(self, modulus, check_squarefree=True):
        if not isinstance(modulus, Poly):
            modulus = Poly(modulus, "u")
        d = modulus.degree
        if d < 1:
            raise ConfigError("modulus must have positive degree")
        lead = modulus.lead()
        if not (lead == 1):
            raise ConfigError("modulus must be monic")
        self.modulus = modulus
        self.d = d
        self.zero_c = _zero_like(lead)
        self.one_c = _one_like(lead)
        # u^(d+j) expressed in the basis 1..u^(d-1)
        c = [modulus.coeff(i) for i in range(d)]
        red = []
        cur = [-x for x in c]
        for _ in range(d - 1):
            red.append(cur)
            top = cur[-1]
            cur = [self.zero_c - top * c[0]] + [cur[i - 1] - top * c[i] for i in range(1, d)]
        self._red = red
        self._psums = None
        if check_squarefree and d > 1:
            g, _, _ = poly_xgcd(modulus, modulus.derivative())
            if g.degree > 0:
                raise NotInvertible("modulus is not squarefree", gcd=g)

    def elem(self, coeffs):
        cs = list(coeffs)
        if len(cs) > self.d:
            return self.reduce(cs)
        cs += [self.zero_c] * (self.d - len(cs))
        return QuotElem(self, tuple(cs))

    def scalar(self, c):
        return self.elem([c])

    def one(self):
        return self.scalar(self.one_c)

    def zero(self):
        return self.scalar(self.zero_c)

    def gen(self):
        if self.d == 1:
            return self.scalar(-self.modulus.coeff(0))
        return self.elem([self.zero_c, self.one_c])

    def reduce(self, cs):
        d = self.d
        cs = list(cs)
        if len(cs) > 2 * d - 1:
            # fold the top down with u^m = u^(m-d) (u^d - P) until the table below applies
            c = [self.modulus.coeff(i) for i in range(d)]
            for m in range(len(cs) - 1, 2 * d - 2, -1):
                x = cs[m]
                cs[m] = self.zero_c
                for i in range(d):
                    cs[m - d + i] = cs[m - d + i] - x * c[i]
            cs = cs[: 2 * d - 1]
        out = list(cs[:d]) + [self.zero_c] * max(0, d - len(cs))
        for j, x in enumerate(cs[d:]):
            if is_zero(x) and not isinstance(x, TruncatedSeries):
                continue
            row = self._red[j]
            for i in range(d):
                out[i] = out[i] + x * row[i]
        return QuotElem(self, tuple(out))

    def power_sums(self, n):
        """p_0..p_n of the roots, via Newton's identities."""
        if self._psums is not None and len(self._psums) > n:
            return self._psums
        d = self.d
        # monic P = u^d + e1 u^(d-1) + ...; e_k = coeff(d-k)
        e = [self.modulus.coeff(d - k) for k in range(d + 1)]
        p = [self.one_c * d]
        for k in range(1, n + 1):
            acc = self.zero_c
            for i in range(1, min(k - 1, d) + 1):
                acc = acc + e[i] * p[k - i]
            if k <= d:
                acc = acc + e[k] * k
            p.append(-acc)
        self._psums = p
        return p

    def __eq__(self, other):
        return isinstance(other, QuotRing) and (self is other or self.modulus == other.modulus)

    __hash__ = None


class QuotElem:
    """Reduced representative sum(coeffs[i] * u**i) modulo the ring's modulus."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring, coeffs):
        self.ring = ring
        self.coeffs = coeffs

    def _lift(self, other):
        if isinstance(other, QuotElem):
            return other
        if isinstance(other, (int, _MPQ, TruncatedSeries)):
            return self.ring.scalar(other if isinstance(other, TruncatedSeries) else self.ring.one_c * other)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return QuotElem(self.ring, tuple(a + b for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return QuotElem(self.ring, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return QuotElem(self.ring, tuple(a - b for a, b in zip(self.coeffs, o.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, _MPQ, TruncatedSeries)):
            return QuotElem(self.ring, tuple(a * other for a in self.coeffs))
        if not isinstance(other, QuotElem):
            return NotImplemented
        A, B = self.coeffs, other.coeffs
        d = self.ring.d
        if d == 1:
            return QuotElem(self.ring, (A[0] * B[0],))
        prod = [None] * (2 * d - 1)
        for i, a in enumerate(A):
            if _skip(a):
                continue
            for j, b in enumerate(B):
                if _skip(b):
                    continue
                p = a * b
                prod[i + j] = p if prod[i + j] is None else prod[i + j] + p
        z = self.ring.zero_c
        return self.ring.reduce([z if x is None else x for x in prod])

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            return self.invert() ** (-k)
        out = self.ring.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def is_zero(self):
        return all(is_zero(a) for a in self.coeffs)

    def is_exact_zero(self):
        return all(_skip(a) for a in self.coeffs)

    def to_poly(self):
        return Poly(self.coeffs, "u")

    def invert(self):
        return quot_invert(self)

    def __truediv__(self, other):
        if isinstance(other, QuotElem):
            return self * other.invert()
        return self * ring_inverse(other)

    def trace(self):
        return trace_sum(self)

    def truncate(self, prec):
        return QuotElem(self.ring, tuple(a.truncate(prec) for a in self.coeffs))

    def shift(self, k):
        return QuotElem(self.ring, tuple(a.shift(k) for a in self.coeffs))

    def __eq__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return (self - o).is_zero()

    __hash__ = None

    def __str__(self):
        return "[" + ", ".join(str(a) for a in self.coeffs) + "]"

    __repr__ = __str__


def _skip(a):
    if isinstance(a, TruncatedSeries):
        return a.is_exact_zero()
    return a == 0


def quot_invert(e):
    """Inverse modulo the ring's modulus by extended Euclid."""
    ring = e.ring
    if ring.d == 1:
        return QuotElem(ring, (ring_inverse(e.coeffs[0]),))
    a = e.to_poly().strip_inexact()
    if a.is_exact_zero():
        raise NotInvertible("zero element", gcd=ring.modulus)
    g, s, _ = poly_xgcd(a, ring.modulus)
    if g.degree > 0:
        raise NotInvertible("element shares a factor with the modulus", gcd=g)
    return ring.elem(list(s.coeffs))


def trace_sum(e):
    """Sum of ``e`` over all roots of the modulus."""
    ring = e.ring
    p = ring.power_sums(ring.d - 1)
    acc = ring.zero_c
    for i, c in enumerate(e.coeffs):
        if _skip(c):
            continue
        acc = acc + c * p[i]
    return acc

"""Dense power series in one or two local variables with TruncatedSeries coefficients.

A univariate series is a list ``A`` with ``A[i]`` the coefficient of z**i,
known modulo z**len(A).  Bivariate series are square lists of lists.
"""
from __future__ import annotations

from gmpy2 import mpq

from .errors import NonUnitLinearTerm
from .exactring import TruncatedSeries

TS = TruncatedSeries
ZERO = TS()


def as_ts(x):
    if isinstance(x, TS):
        return x
    return TS.constant(x)


def ps_add(A, B):
    n = min(len(A), len(B))
    return [A[i] + B[i] for i in range(n)]


def ps_scale(A, c):
    return [a * c for a in A]


def ps_mul(A, B, n=None):
    if n is None:
        n = min(len(A), len(B))
    out = [ZERO] * n
    for i in range(min(n, len(A))):
        a = A[i]
        if a.is_exact_zero():
            continue
        for j in range(min(n - i, len(B))):
            out[i + j] = out[i + j] + a * B[j]
    return out


def ps_inv(A, n=None):
    """1/A for A[0] invertible in Q[[beta]] (Laurent inverse allowed)."""
    if n is None:
        n = len(A)
    inv0 = A[0].invert(laurent=True)
    out = [inv0]
    for k in range(1, n):
        acc = ZERO
        for i in range(1, min(k, len(A) - 1) + 1):
            acc = acc + A[i] * out[k - i]
        out.append(-(acc * inv0))
    return out


def ps_pow(A, k, n=None):
    if n is None:
        n = len(A)
    out = [TS.constant(1)] + [ZERO] * (n - 1)
    base = A[:n]
    while k:
        if k & 1:
            out = ps_mul(out, base, n)
        k >>= 1
        if k:
            base = ps_mul(base, base, n)
    return out


def ps_powers(A, qmax, n=None):
    """[A**0, ..., A**qmax] modulo z**n."""
    if n is None:
        n = len(A)
    out = [[TS.constant(1)] + [ZERO] * (n - 1)]
    for _ in range(qmax):
        out.append(ps_mul(out[-1], A, n))
    return out


def ps_derivative(A):
    return [A[i] * i for i in range(1, len(A))]


def ps_compose(F, G, n=None):
    """F(G(z)) with G[0] = 0."""
    if n is None:
        n = len(G)
    if not G[0].is_zero():
        raise NonUnitLinearTerm("inner series must vanish at the origin")
    out = [ZERO] * n
    for c in reversed(F[:n]):
        out = ps_mul(out, G, n)
        out[0] = out[0] + c
    return out


def ps_revert(F, n=None):
    """Compositional inverse H with F(H(z)) = z, for F = c1 z + ...; c1 a unit."""
    if n is None:
        n = len(F)
    if not F[0].is_zero() or F[1].is_zero():
        raise NonUnitLinearTerm("series must start at an invertible linear term")
    c1inv = F[1].invert(laurent=True)
    H = [ZERO, c1inv] + [ZERO] * (n - 2)
    # fix one more coefficient per sweep: F(H) - z has its lowest error at z^k
    for k in range(2, n):
        err = ps_compose(F, H, k + 1)[k]
        H[k] = H[k] - err * c1inv
    return H[:n]


def ps_log1(A, n=None):
    """log(A) for A[0] = 1."""
    if n is None:
        n = len(A)
    dl = ps_mul(ps_derivative(A), ps_inv(A, n - 1), n - 1)
    return [ZERO] + [dl[i - 1] * mpq(1, i) for i in range(1, n)]


# ---- bivariate ---------------------------------------------------------------


def bs_mul(A, B, n):
    out = [[ZERO] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            a = A[i][j]
            if a.is_exact_zero():
                continue
            for p in range(n - i):
                row = B[p]
                tgt = out[i + p]
                for q in range(n - j):
                    b = row[q]
                    if not b.is_exact_zero():
                        tgt[j + q] = tgt[j + q] + a * b
    return out


def bs_inv(A, n):
    """1/A with A[0][0] invertible, by the recurrence on total degree."""
    inv0 = A[0][0].invert(laurent=True)
    out = [[ZERO] * n for _ in range(n)]
    for tot in range(0, 2 * n - 1):
        for i in range(max(0, tot - n + 1), min(tot, n - 1) + 1):
            j = tot - i
            if tot == 0:
                out[0][0] = inv0
                continue
            acc = ZERO
            for p in range(i + 1):
                for q in range(j + 1):
                    if p == 0 and q == 0:
                        continue
                    a = A[p][q]
                    if not a.is_exact_zero():
                        acc = acc + a * out[i - p][j - q]
            out[i][j] = -(acc * inv0)
    return out


def bs_log_mixed(A, n):
    """Coefficients L[i][j], i, j >= 1, of log(A) for A[0][0] = 1.

    Only the mixed part is returned; pure powers of one variable are left as
    zero.  Uses d/dz1 log A = (d/dz1 A) / A.
    """
    inv = bs_inv(A, n)
    dA = [[A[i + 1][j] * (i + 1) for j in range(n)] for i in range(n - 1)] + [[ZERO] * n]
    q = bs_mul(dA, inv, n)
    L = [[ZERO] * n for _ in range(n)]
    for i in range(1, n):
        for j in range(1, n):
            L[i][j] = q[i - 1][j] * mpq(1, i)
    return L

from fractions import Fraction
from math import comb

import pytest
from gmpy2 import mpq
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from fsmaps.errors import NonSquareLeading, NonUnitLinearTerm, NotInvertible, PrecisionError
from fsmaps.exactring import (
    EXACT,
    LocalSeries,
    Poly,
    QuotRing,
    TruncatedSeries,
    as_rational,
    fmt_rational,
    local_compose_invert,
    quot_invert,
    series_invert,
    series_sqrt,
    trace_sum,
)

TS = TruncatedSeries
Q = mpq


def ts(*cs, prec=None, val=0):
    return TS([Q(c) for c in cs], val, prec)


rationals = st.fractions(min_value=-5, max_value=5, max_denominator=6).map(lambda f: Q(f.numerator, f.denominator))


@st.composite
def series(draw, prec=8, unit=False):
    n = draw(st.integers(1, prec))
    cs = draw(st.lists(rationals, min_size=n, max_size=n))
    if unit:
        c0 = draw(rationals.filter(bool))
        cs[0] = c0
    return TS(cs, 0, prec)


# ---- rationals -------------------------------------------------------------------


def test_rationals_reduce_and_parse():
    q = as_rational("6/4")
    assert (q.numerator, q.denominator) == (3, 2)
    assert as_rational("-2/-4") == Q(1, 2)
    assert fmt_rational(Q(-3, 6)) == "-1/2"
    with pytest.raises(ValueError):
        as_rational("1/0")


# ---- series_invert -----------------------------------------------------------------


def test_invert_geometric():
    inv = series_invert(ts(1, -1), prec=10)
    assert [inv.coeff(k) for k in range(10)] == [1] * 10
    assert inv.prec == 10


def test_invert_one():
    assert series_invert(TS.constant(1)).identical(TS.constant(1))


def test_invert_positive_valuation_needs_laurent():
    s = ts(0, 1, 1, prec=8)
    with pytest.raises(NotInvertible):
        series_invert(s)
    inv = series_invert(s, laurent=True)
    assert inv.val == -1
    assert [inv.coeff(k) for k in range(-1, 5)] == [1, -1, 1, -1, 1, -1]


def test_invert_never_claims_unknown_coefficients():
    inv = series_invert(ts(0, 1, 1, prec=8), laurent=True)
    assert inv.prec == 6
    with pytest.raises(PrecisionError):
        inv.coeff(6)


# ---- series_sqrt -------------------------------------------------------------------


def test_sqrt_binomial():
    r = series_sqrt(ts(1, 1, prec=6))
    expect = [Fraction(1), Fraction(1, 2), Fraction(-1, 8), Fraction(1, 16), Fraction(-5, 128), Fraction(7, 256)]
    assert [r.coeff(k) for k in range(6)] == [Q(f.numerator, f.denominator) for f in expect]


def test_sqrt_monomial():
    assert series_sqrt(TS.monomial(1, 2)).identical(TS.monomial(1, 1))


def test_sqrt_irrational_leading():
    with pytest.raises(NonSquareLeading):
        series_sqrt(ts(2, 1, prec=4))


# ---- quotient rings ----------------------------------------------------------------


def ring(*coeffs, check=True):
    return QuotRing(Poly([Q(c) for c in coeffs], "u"), check_squarefree=check)


def test_quot_invert_generator():
    R = ring(-2, 0, 1)
    inv = quot_invert(R.gen())
    assert inv.coeffs == (0, Q(1, 2))


def test_quot_invert_shifted():
    R = ring(-2, 0, 1)
    e = R.elem([Q(-3), Q(1)])
    inv = quot_invert(e)
    assert inv.coeffs == (Q(-3, 7), Q(-1, 7))
    # by hand: (u - 3)(a + b u) = (a - 3b... ) reduced with u^2 = 2
    a, b = inv.coeffs
    assert (-3 * a + 2 * b, a - 3 * b) == (1, 0)


def test_quot_invert_nilpotent():
    R = ring(0, 0, 1, check=False)
    with pytest.raises(NotInvertible):
        quot_invert(R.gen())


def test_non_squarefree_modulus_rejected():
    with pytest.raises(NotInvertible):
        ring(1, -2, 1)


def test_trace_examples():
    R = ring(-2, 0, 1)
    u = R.gen()
    assert trace_sum(u) == 0
    assert trace_sum(u * u) == 4
    # 1/(sqrt2 - 3) + 1/(-sqrt2 - 3) = -6/7
    assert trace_sum(quot_invert(u - 3)) == Q(-6, 7)


def _expand_roots(roots):
    # monic prod (u - r)
    cs = [Q(1)]
    for r in roots:
        nxt = [Q(0)] * (len(cs) + 1)
        for i, c in enumerate(cs):
            nxt[i + 1] += c
            nxt[i] -= r * c
        cs = nxt
    return cs


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(-6, 6), min_size=1, max_size=4, unique=True),
       st.lists(rationals, min_size=1, max_size=6))
def test_trace_matches_sum_over_rational_roots(roots, cs):
    R = QuotRing(Poly(_expand_roots([Q(r) for r in roots]), "u"))
    e = R.elem(cs)
    direct = sum((sum(c * Q(r) ** i for i, c in enumerate(cs)) for r in roots), Q(0))
    assert trace_sum(e) == direct


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(-6, 6), min_size=2, max_size=4, unique=True),
       st.lists(rationals, min_size=1, max_size=4))
def test_quot_invert_round_trip(roots, cs):
    R = QuotRing(Poly(_expand_roots([Q(r) for r in roots]), "u"))
    # invertible iff it vanishes at no root
    assume(all(sum(c * Q(r) ** i for i, c in enumerate(cs)) != 0 for r in roots))
    e = R.elem(cs)
    prod = e * quot_invert(e)
    assert prod.coeffs == R.one().coeffs


# ---- local series ------------------------------------------------------------------


def _local(cs, val=0, prec=EXACT):
    return LocalSeries([Q(c) for c in cs], val, prec, Q(0))


def test_local_invert_catalan():
    f = _local([1, 1], val=1, prec=8)
    h = local_compose_invert(f, "invert")
    # Lagrange inversion: [s^n] h = (-1)^(n-1) Catalan(n-1)
    expect = [(-1) ** (n - 1) * comb(2 * n - 2, n - 1) // n for n in range(1, 8)]
    assert [h.coeff(n) for n in range(1, 8)] == expect


def test_local_invert_identity():
    h = local_compose_invert(_local([1], val=1, prec=6), "invert")
    assert [h.coeff(n) for n in range(6)] == [0, 1, 0, 0, 0, 0]


def test_local_invert_rejects_square():
    with pytest.raises(NonUnitLinearTerm):
        local_compose_invert(_local([1], val=2, prec=6), "invert")


@settings(max_examples=40, deadline=None)
@given(st.lists(rationals, min_size=5, max_size=5), rationals.filter(bool))
def test_local_round_trip(tail, c1):
    f = _local([c1] + tail, val=1, prec=6)
    h = local_compose_invert(f, "invert")
    back = local_compose_invert(f, "compose", h)
    assert [back.coeff(n) for n in range(6)] == [0, 1, 0, 0, 0, 0]


# ---- algebra laws --------------------------------------------------------------------


def _same(a, b):
    return (a - b).is_zero()


@settings(max_examples=60, deadline=None)
@given(series(), series(), series())
def test_series_ring_laws(a, b, c):
    assert _same((a * b) * c, a * (b * c))
    assert _same(a * (b + c), a * b + a * c)
    assert _same(a + b, b + a)


@settings(max_examples=60, deadline=None)
@given(series(unit=True))
def test_series_inverse_law(a):
    one = a * series_invert(a)
    assert _same(one, TS.constant(1))


@settings(max_examples=60, deadline=None)
@given(series(unit=True))
def test_series_sqrt_law(a):
    sq = a * a
    r = series_sqrt(sq)
    # positive branch
    assert _same(r * r, sq)
    assert r.coeff(0) == abs(a.coeff(0))


@settings(max_examples=40, deadline=None)
@given(series(prec=6), series(prec=9))
def test_precision_narrows_to_the_smaller_window(a, b):
    assert (a + b).prec == 6
    assert (a * b).prec <= 6 + b.val

from fractions import Fraction

import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from fsmaps.curve import (
    DiscData,
    LaurentPoly,
    Potential,
    SpectralCurve,
    build_curves,
    build_exchanged,
    build_ordinary,
    deck_expansion,
    disc_residuals,
    eval_laurent,
    solve_disc_data,
)
from fsmaps.errors import ConfigError, DegenerateRamification
from fsmaps.exactring import EXACT, LocalSeries, Poly, TruncatedSeries, ring_inverse

TS = TruncatedSeries
Q = mpq
D = 16


def quartic(t4=1, order=D):
    V = Potential.from_couplings({4: t4})
    return V, solve_disc_data(V, order)


def _c2_closed_form(n):
    """(1 - sqrt(1 - 12 x)) / 6 coefficients in x, from the binomial series."""
    s = [Fraction(1)]
    for k in range(1, n + 1):
        s.append(s[-1] * Fraction(3 - 2 * k, 2 * k) * (-12))
    return [-s[k] / 6 for k in range(1, n + 1)]


# ---- disc data -------------------------------------------------------------------


def test_gaussian_disc_data_is_exact():
    disc = solve_disc_data(Potential(), D)
    assert disc.a.is_zero()
    assert disc.c.prec == D - 1
    assert all(disc.c.coeff(k) == (1 if k == 1 else 0) for k in range(disc.c.prec))


def test_quartic_c_squared_matches_closed_form():
    _, disc = quartic()
    expect = _c2_closed_form(D // 2 - 1)
    got = [disc.S.coeff(2 * (i + 1)) for i in range(len(expect))]
    assert got == [Q(f.numerator, f.denominator) for f in expect]
    assert got[:4] == [1, 3, 18, 135]
    assert disc.a.is_zero()


def test_cubic_disc_data():
    V = Potential.from_couplings({3: 1})
    disc = solve_disc_data(V, D)
    assert disc.a.coeff(0) == 0 and disc.a.coeff(1) == 0 and disc.a.coeff(2) == 2
    assert disc.c.coeff(1) == 1 and disc.c.coeff(2) == 0
    e0, e1 = disc_residuals(V, disc)
    assert e0.is_zero() and e1.is_zero()


def test_bad_couplings_rejected():
    with pytest.raises(ConfigError):
        Potential.from_couplings({2: 1})
    with pytest.raises(ConfigError):
        solve_disc_data(Potential(), 1)


couplings = st.fixed_dictionaries({
    3: st.fractions(-2, 2, max_denominator=4),
    4: st.fractions(-2, 2, max_denominator=4),
})


@settings(max_examples=15, deadline=None)
@given(couplings)
def test_disc_conditions_vanish(cp):
    V = Potential.from_couplings({j: f"{f.numerator}/{f.denominator}" for j, f in cp.items()})
    disc = solve_disc_data(V, 10)
    e0, e1 = disc_residuals(V, disc)
    assert e0.is_zero() and e1.is_zero()
    assert disc.c.coeff(1) == 1  # c / beta -> 1, the formal branch


@settings(max_examples=10, deadline=None)
@given(st.fractions(-3, 3, max_denominator=5).filter(bool), st.fractions(-3, 3, max_denominator=5))
def test_even_potentials_have_a_zero(t4, t6):
    V = Potential.from_couplings({4: f"{t4.numerator}/{t4.denominator}", 6: f"{t6.numerator}/{t6.denominator}"})
    assert solve_disc_data(V, 10).a.is_zero()


# ---- curves ----------------------------------------------------------------------


def test_gaussian_exchanged_curve_is_degenerate():
    V = Potential()
    disc = solve_disc_data(V, D)
    with pytest.raises(DegenerateRamification):
        build_exchanged(V, disc)


def test_ordinary_ramification_polynomial():
    for cp in ({}, {4: 1}, {3: 1}, {3: "1/2", 4: 2}):
        V = Potential.from_couplings(cp)
        o = build_ordinary(V, solve_disc_data(V, 8))
        assert [x.coeff(0) for x in o.ram_poly.coeffs] == [-1, 0, 1]
        assert all(x.is_exact() for x in o.ram_poly.coeffs)


def test_quartic_cofunction_by_direct_expansion():
    V, disc = quartic()
    o = build_ordinary(V, disc)
    a, c = disc.a, disc.c
    # [V'(x)]_{<=0} for V'(u) = u - u^3 and x = a + c(theta + 1/theta)
    assert (o.cofunction.coeff(-1) - (c - c ** 3 * 3 - a * a * c * 3)).is_zero()
    assert (o.cofunction.coeff(-3) + c ** 3).is_zero()
    assert o.cofunction.coeff(-2).is_zero()


def test_quartic_exchanged_ramification_polynomial():
    V, disc = quartic()
    x = build_exchanged(V, disc)
    P = x.ram_poly_theta()
    assert P.degree == 2
    S3 = disc.S * 3
    target = S3 * (1 - S3).invert()
    assert (P.coeff(0) + target).is_zero()
    assert P.coeff(1).is_zero()


@pytest.mark.parametrize("cp", [{4: 1}, {3: 1}, {3: 1, 4: 1}])
def test_exchanged_cover_is_critical_at_its_ramification_points(cp):
    V = Potential.from_couplings(cp)
    x = build_exchanged(V, solve_disc_data(V, 10))
    R = x.ring()
    u = R.gen()
    th = LocalSeries([u], 0, EXACT, R.zero())
    inv = LocalSeries([ring_inverse(u)], 0, EXACT, R.zero())
    dy = eval_laurent(x.cover.derivative(), th, inv)
    assert dy.coeff(0).is_zero()
    assert x.ram_poly.degree == V.r - 1


def test_curves_exchange_their_pair():
    V, disc = quartic()
    o, x = build_curves(V, disc)
    # y(theta) on the ordinary curve equals the exchanged cover at phi = theta / c
    for k in range(1, V.r + 1):
        assert (o.cofunction.coeff(-k) - x.cover.coeff(-k) * disc.c ** k).is_zero()
    # x(theta) = a + c(theta + 1/theta) equals a + S phi + 1/phi
    assert (x.cofunction.coeff(1) - disc.S).is_zero()
    assert (x.cofunction.coeff(-1) - 1).is_zero()
    assert (x.cofunction.coeff(0) - disc.a).is_zero()


def test_exchanged_cover_behaviour_at_infinity():
    V, disc = quartic()
    x = build_exchanged(V, disc)
    assert x.cover.coeff(0).is_zero()
    # theta * y -> ytil_1 c = beta^2 / c = 1 / (alpha c)
    lim = x.cover.coeff(-1) * disc.c
    assert (lim - TS.monomial(1, 2) * disc.c.invert(laurent=True)).is_zero()


# ---- deck transformation ----------------------------------------------------------


def _check_deck(curve, m):
    rd = deck_expansion(curve, m)
    X = curve.tr_cover
    lhs = eval_laurent(X, rd.sigma, rd.sigma_inv)
    rhs = eval_laurent(X, rd.theta, rd.theta_inv)
    diff = (lhs - rhs).truncate(m + 1)
    assert all(diff.coeff(k).is_zero() for k in range(m + 1))
    # sigma(sigma(theta)) = theta: tau(tau(s)) = s
    back = rd.deck.compose(rd.deck).truncate(m + 1)
    assert [back.coeff(k).is_zero() for k in range(m + 1)] == [k != 1 for k in range(m + 1)]
    assert (back.coeff(1) - rd.ring.one()).is_zero()
    return rd


def test_deck_is_inversion_on_the_ordinary_curve():
    V, disc = quartic(order=8)
    o = build_ordinary(V, disc)
    rd = _check_deck(o, 6)
    # sigma = 1/theta exactly
    diff = (rd.sigma - rd.theta_inv).truncate(7)
    assert all(diff.coeff(k).is_zero() for k in range(7))


def test_deck_for_a_square_cover():
    # (theta - 1)^2 - 1: the deck map is the reflection theta -> 2 - theta
    one = TS.constant(1)
    disc = DiscData(TS(), one, one, one, 8)
    cover = LaurentPoly({2: one, 1: one * -2})
    curve = SpectralCurve("exchanged", Potential(), disc, "phi", cover, LaurentPoly({}),
                          Poly([-one, one], "phi"), cover, LaurentPoly({}), 0)
    rd = deck_expansion(curve, 6)
    assert (rd.deck.coeff(1) + 1).is_zero()
    assert all(rd.deck.coeff(k).is_zero() for k in range(2, 7))


@pytest.mark.parametrize("cp", [{4: 1}, {3: 1}, {3: "1/3", 4: "1/2"}])
def test_deck_on_exchanged_curves(cp):
    V = Potential.from_couplings(cp)
    x = build_exchanged(V, solve_disc_data(V, 8))
    rd = _check_deck(x, 6)
    assert rd.cover_taylor.coeff(1).is_zero()
    ring_inverse(rd.cover_taylor.coeff(2))  # simple ramification: invertible

from fractions import Fraction
from itertools import permutations

import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from fsmaps.curve import Potential, build_curves, build_ordinary, solve_disc_data
from fsmaps.errors import PoleAtExpansionPoint, PrecisionError
from fsmaps.exactring import TruncatedSeries
from fsmaps.extract import loop_equation_holds, residues_vanish
from fsmaps.tr import TREngine, equal, expand_at, is_symmetric, omega01, omega02, pole_bound

TS = TruncatedSeries
Q = mpq


@pytest.fixture(scope="module")
def gaussian():
    V = Potential()
    o = build_ordinary(V, solve_disc_data(V, 10))
    return o, TREngine(o)


@pytest.fixture(scope="module")
def quartic():
    V = Potential.from_couplings({4: 1})
    o, x = build_curves(V, solve_disc_data(V, 10))
    return o, x, TREngine(o), TREngine(x)


def evaluate(md, zs, k):
    """[beta^k] of the coefficient function of md at rational points zs."""
    num = Fraction(0)
    for e, c in md.numer.terms.items():
        term = Fraction(c.coeff(k))
        for z, ei in zip(zs, e):
            term *= Fraction(z) ** ei
        num += term
    den = Fraction(1)
    for z, d in zip(zs, md.dens):
        pz = sum(Fraction(c.coeff(0)) * Fraction(z) ** i for i, c in enumerate(md.modulus.coeffs))
        den *= pz ** d
    return num / den


def test_initial_data_gaussian(gaussian):
    o, _ = gaussian
    w = omega01(o)
    # y dx = beta/theta * beta (1 - theta^-2) dtheta
    assert set(w.density.terms) == {-1, -3}
    assert (w.density.coeff(-1) - TS.monomial(1, 2)).is_zero()
    assert (w.density.coeff(-3) + TS.monomial(1, 2)).is_zero()
    assert omega02().is_special()


def test_omega03_gaussian_matches_residue_formula(gaussian):
    _, eng = gaussian
    w = eng.omega(0, 3)
    # the kernel integrates from sigma(theta) to theta, so omega03 = -sum_a Res B B B / (dx dy);
    # here x' y' = -beta^2 (theta^2 - 1) / theta^4 with simple zeros at theta = +-1
    zs = (Fraction(2), Fraction(3), Fraction(-5, 2))
    oracle = Fraction(0)
    for a in (1, -1):
        prod = Fraction(1)
        for z in zs:
            prod /= (a - z) ** 2
        oracle -= prod * Fraction(a) ** 4 / (-2 * a)
    assert evaluate(w, zs, -2) == oracle
    assert all(evaluate(w, zs, k) == 0 for k in range(-1, 4))


def test_omega11_gaussian(gaussian):
    _, eng = gaussian
    w = eng.omega(1, 1)
    # the GUE value theta^3 / (theta^2 - 1)^4, at beta^-2 for x = beta(theta + 1/theta)
    assert w.dens == (4,)
    assert set(w.numer.terms) == {(3,)}
    c = w.numer.terms[(3,)]
    assert c.items() == [(-2, 1)]


def test_pole_bound():
    assert [pole_bound(g, n) for g, n in ((0, 3), (1, 1), (1, 2), (2, 1))] == [2, 4, 6, 10]


@pytest.mark.parametrize("gn", [(0, 3), (1, 1), (0, 4), (1, 2), (2, 1)])
def test_quartic_forms_are_well_formed(quartic, gn):
    o, x, eo, ex = quartic
    for eng in (eo, ex):
        w = eng.omega(*gn)
        assert is_symmetric(w)
        assert all(d <= pole_bound(*gn) for d in w.dens)
        if gn[1] == 1:
            assert residues_vanish(eng.curve, w)
    if gn[1] == 1:
        assert loop_equation_holds(eo.omega(*gn))


def test_full_symmetry_of_omega04(quartic):
    _, _, eo, _ = quartic
    w = eo.omega(0, 4)
    for perm in permutations(range(4)):
        assert equal(w, w.permuted(perm))


@settings(max_examples=8, deadline=None)
@given(st.fractions(-2, 2, max_denominator=3).filter(bool), st.fractions(-2, 2, max_denominator=3))
def test_loop_equation_and_symmetry_random_potentials(t4, t3):
    V = Potential.from_couplings({3: f"{t3.numerator}/{t3.denominator}", 4: f"{t4.numerator}/{t4.denominator}"})
    o = build_ordinary(V, solve_disc_data(V, 8))
    eng = TREngine(o)
    assert loop_equation_holds(eng.omega(1, 1))
    assert is_symmetric(eng.omega(0, 3))


def test_equal_detects_differences(quartic):
    _, _, eo, ex = quartic
    w = eo.omega(0, 3)
    assert equal(w, w)
    assert not equal(w, w.shifted(2))
    assert not equal(eo.omega(1, 1), eo.omega(0, 3))
    assert not equal(eo.omega(1, 1), ex.omega(1, 1))
    assert equal(omega02(), omega02())


# ---- expansions ----------------------------------------------------------------------


def test_expand_omega02_at_infinity():
    ex = expand_at(omega02(), 0, "inf", order=5)
    # 1/(t1 - t2)^2 = sum_k k t2^(k-1) t1^(-k-1)
    for k in range(1, 6):
        term = ex.coeff(-k - 1)
        assert set(term.terms) == {(k - 1,)}
        assert term.terms[(k - 1,)].items() == [(0, k)]


def test_expand_omega01_raises(quartic):
    o, *_ = quartic
    with pytest.raises(PoleAtExpansionPoint):
        expand_at(omega01(o), 0, "inf")


def _univariate(md):
    P = [c for c in md.modulus.coeffs]
    N = [md.numer.terms.get((i,), TS()) for i in range(max(e[0] for e in md.numer.terms) + 1)]
    return N, P, md.dens[0]


@pytest.mark.parametrize("point", ["0", "inf"])
def test_expansion_times_denominator_gives_numerator(quartic, point):
    o, _, eo, _ = quartic
    w = eo.omega(1, 1)
    order = 6
    ex = expand_at(w, 0, point, order)
    N, P, d = _univariate(w)
    Pd = [TS.constant(1)]
    for _ in range(d):
        nxt = [TS()] * (len(Pd) + len(P) - 1)
        for i, a in enumerate(Pd):
            for j, b in enumerate(P):
                nxt[i + j] = nxt[i + j] + a * b
        Pd = nxt
    lo, hi = ex.window
    if point == "0":
        # (sum_e s_e theta^e) * P^d = N, checked for exponents below the window edge
        for m in range(hi):
            acc = TS()
            for j, b in enumerate(Pd):
                if 0 <= m - j < hi and ex.coeff(m - j) is not None:
                    acc = acc + ex.coeff(m - j).terms.get((), TS()) * b
            target = N[m] if m < len(N) else TS()
            assert (acc - target).is_zero()
    else:
        deg = len(Pd) - 1
        top = len(N) - 1
        for m in range(top, top - order + 1, -1):
            acc = TS()
            for j, b in enumerate(Pd):
                e = m - j
                if e > lo and ex.coeff(e) is not None:
                    acc = acc + ex.coeff(e).terms.get((), TS()) * b
            target = N[m] if 0 <= m < len(N) else TS()
            assert (acc - target).is_zero(), m
        assert deg == 2 * d


def test_expansion_window_is_enforced(quartic):
    _, _, eo, _ = quartic
    ex = expand_at(eo.omega(1, 1), 0, "0", order=3)
    with pytest.raises(PrecisionError):
        ex.coeff(3)


def test_omega_is_cached(quartic):
    _, _, eo, _ = quartic
    assert eo.normalized(1, 1) is eo.normalized(1, 1)

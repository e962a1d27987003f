from fractions import Fraction
from math import comb

import pytest
from gmpy2 import mpq

from fsmaps import census
from fsmaps.counts import euler_vertices
from fsmaps.curve import Potential, build_curves, build_ordinary, solve_disc_data
from fsmaps.errors import OrderExhausted
from fsmaps.exactring import TruncatedSeries
from fsmaps.extract import (
    check_disc_inversion,
    check_cylinder_relation,
    check_pants_relation,
    closed_form_vs_table,
    compare_with_oracle,
    extract_fsmap_counts,
    extract_map_counts,
    free_energy,
    free_energy_via_ydx,
    fsmap_count_series,
    genus1_quadrangulation_closed_form,
    map_combination,
    map_count_series,
    rest_coefficients,
    rest_combination,
)
from fsmaps.tr import TREngine

TS = TruncatedSeries
Q = mpq


def _setup(cp, D):
    V = Potential.from_couplings(cp)
    o, x = build_curves(V, solve_disc_data(V, D))
    return o, x, TREngine(o), TREngine(x)


@pytest.fixture(scope="module")
def quartic():
    return _setup({4: 1}, 16)


@pytest.fixture(scope="module")
def quartic12():
    return _setup({4: 1}, 12)


@pytest.fixture(scope="module")
def cubic12():
    return _setup({3: 1}, 12)


@pytest.fixture(scope="module")
def gaussian():
    V = Potential()
    return build_ordinary(V, solve_disc_data(V, 16))


# ---- discs and small maps -------------------------------------------------------------


def test_single_vertex_map(gaussian):
    t = extract_map_counts(gaussian, 0, (0,))
    assert t.nonzero() == {(1, ()): 1}


def test_catalan_discs(gaussian):
    for m in range(1, 6):
        t = extract_map_counts(gaussian, 0, (2 * m,))
        # plane trees with m edges have m + 1 vertices
        assert t.nonzero() == {(m + 1, ()): comb(2 * m, m) // (m + 1)}


def test_odd_gaussian_discs_vanish(gaussian):
    for k in (1, 3, 5):
        assert not extract_map_counts(gaussian, 0, (k,)).nonzero()


def test_torus_with_digon_boundary(quartic):
    o, _, eo, _ = quartic
    t = extract_map_counts(o, 1, (2,), eo)
    low = min(V for V, _ in t.nonzero())
    assert low == 1
    assert t.entries[(1, ((4, 1),))] == 1
    assert extract_map_counts(o, 1, (4,), eo).get(()) == 1
    assert extract_map_counts(o, 1, (2,), eo).get(()) == 0


def test_fully_simple_t0_layer(quartic):
    _, x, _, ex = quartic
    assert extract_fsmap_counts(x, 0, (2,), ex).entries[(2, ())] == 1
    for k in (4, 6, 8):
        assert extract_fsmap_counts(x, 0, (k,), ex).get(()) == 0
    # a single boundary face of positive genus is never fully simple
    for k in (2, 4, 6):
        assert extract_fsmap_counts(x, 1, (k,), ex).get(()) == 0


def test_fully_simple_torus_leading_entry(quartic):
    _, x, _, ex = quartic
    t = extract_fsmap_counts(x, 1, (2,), ex)
    assert t.get(((4, 1),)) == 0
    assert t.entries[(2, ((4, 2),))] == 6
    assert census.count_profile(1, (2,), {4: 2}, kind="fully_simple")["fully_simple"] == 6


# ---- invariants of every extracted table ------------------------------------------------


@pytest.mark.parametrize("g,ks", [(0, (1,)), (0, (3,)), (0, (2, 2)), (0, (1, 3)), (1, (1,)), (1, (3,))])
def test_cubic_tables_obey_euler_and_parity(cubic12, g, ks):
    o, x, eo, ex = cubic12
    for s, t in ((map_count_series(o, g, ks, eo), extract_map_counts(o, g, ks, eo)),
                 (fsmap_count_series(x, g, ks, ex), extract_fsmap_counts(x, g, ks, ex))):
        assert s.only_even_powers()
        for (V, prof), v in t.entries.items():
            assert euler_vertices(g, ks, prof) == V
            if (sum(ks) + sum(j * f for j, f in prof)) % 2:
                assert v == 0
            assert v >= 0 and v.denominator == 1


def test_quartic_counts_are_nonnegative_integers(quartic12):
    o, x, eo, ex = quartic12
    for ks in ((2,), (4,), (2, 2)):
        for t in (extract_map_counts(o, 0, ks, eo), extract_fsmap_counts(x, 0, ks, ex)):
            assert all(v >= 0 and v.denominator == 1 for v in t.entries.values())


# ---- census oracle ---------------------------------------------------------------------


@pytest.mark.parametrize("g,ks", [(0, (2,)), (0, (4,)), (0, (6,)), (0, (2, 2)), (0, (1, 3)), (1, (2,)), (1, (4,))])
def test_quartic_tables_match_census(quartic12, g, ks):
    o, x, eo, ex = quartic12
    for curve, t in ((o, extract_map_counts(o, g, ks, eo)), (x, extract_fsmap_counts(x, g, ks, ex))):
        cmp = compare_with_oracle(t, curve, cap=12)
        assert cmp.compared and cmp.ok, cmp.mismatches


@pytest.mark.parametrize("g,ks", [(0, (1,)), (0, (3,)), (0, (2, 2)), (1, (1,))])
def test_cubic_tables_match_census(cubic12, g, ks):
    o, x, eo, ex = cubic12
    for curve, t in ((o, extract_map_counts(o, g, ks, eo)), (x, extract_fsmap_counts(x, g, ks, ex))):
        cmp = compare_with_oracle(t, curve, cap=10)
        assert cmp.compared and cmp.ok, cmp.mismatches


# ---- genus-one closed forms ----------------------------------------------------------


def _phi(m, n):
    """c^(2m)(1 + (m-1) s)/(1 - 12t), s = sqrt(1 - 12t), 6t c^2 = 1 - s, as Fractions."""
    s = [Fraction(comb(2 * k, k), (1 - 2 * k)) * 3 ** k for k in range(n + m + 2)]  # sqrt(1-12t)
    c2 = [-s[i + 1] / 6 for i in range(n + 1)]

    def mul(A, B):
        return [sum(A[i] * B[k - i] for i in range(k + 1)) for k in range(n)]

    acc = [Fraction(1)] + [Fraction(0)] * (n - 1)
    for _ in range(m):
        acc = mul(acc, c2)
    num = [(m - 1) * x for x in s[:n]]
    num[0] += 1
    return mul(mul(acc, num), [Fraction(12) ** i for i in range(n)])


def test_closed_form_series():
    assert genus1_quadrangulation_closed_form("ordinary", 0, 3) == [0, 1, 15]
    fs = genus1_quadrangulation_closed_form("fully_simple", 1, 4)
    assert fs[:2] == [0, 0] and fs[2:] == [6, 117]
    for m in range(3):
        expect = [Fraction(comb(2 * m + 1, m) * (m + 1), 6) * x for x in _phi(m, 6)]
        assert genus1_quadrangulation_closed_form("ordinary", m, 6) == expect
    with pytest.raises(ValueError):
        genus1_quadrangulation_closed_form("fully_simple", 0, 3)


@pytest.mark.parametrize("kind,m", [("ordinary", 0), ("ordinary", 1), ("ordinary", 2), ("fully_simple", 1),
                                    ("fully_simple", 2)])
def test_closed_forms_match_tr(quartic, kind, m):
    o, x, eo, ex = quartic
    if kind == "ordinary":
        t = extract_map_counts(o, 1, (2 * m + 2,), eo)
    else:
        t = extract_fsmap_counts(x, 1, (2 * m,), ex)
    rows = closed_form_vs_table(t, kind, m)
    assert sum(1 for _, a, _ in rows if a) >= 3
    assert all(a == b for _, a, b in rows)
    if kind == "fully_simple":
        assert all(a == 0 for f, a, _ in rows if f <= m)


# ---- free energies --------------------------------------------------------------------


def _bernoulli(n):
    B = [Fraction(1)]
    for m in range(1, n + 1):
        B.append(-sum(comb(m + 1, k) * B[k] for k in range(m)) / (m + 1))
    return B[n]


@pytest.fixture(scope="module")
def genus2(quartic):
    o, x, eo, ex = quartic
    w, wx = eo.omega(2, 1), ex.omega(2, 1)
    return {
        "F": free_energy(o, 2, w).value,
        "Fx": free_energy(x, 2, wx).value,
        "Fx_ydx": free_energy_via_ydx(x, 2, wx),
        "F_shift": free_energy(o, 2, w, basepoint=TS.constant(Q(7, 3))).value,
        "comb": map_combination(o, 2, eo),
        "rest": rest_coefficients(x, wx, 5),
    }


def _closed(g, f):
    return census.count_profile(g, (), {4: f}, kind="ordinary")["ordinary"]


def test_closed_census_values():
    assert _closed(2, 3) == Q(15, 4)
    assert _closed(2, 4) == Q(2007, 16)


def test_residue_form_is_closed_maps_plus_gaussian_constant(genus2):
    F = genus2["F"]
    assert F.only_even_powers()
    # Harer-Zagier: the Gaussian genus-2 free energy is B_4 / (4 * 2)
    gauss = _bernoulli(4) / (4 * 2)
    assert F.coeff(0) == (2 - 4) * gauss == Q(1, 120)
    for V, f in ((1, 3), (2, 4)):
        assert F.coeff(2 * (V + 2)) == (2 - 4) * _closed(2, f)


def test_map_combination_is_alpha_derivative_of_closed_maps(genus2):
    c = genus2["comb"]
    assert c.coeff(0) == 0
    for V, f in ((1, 3), (2, 4)):
        assert c.coeff(2 * (V + 2)) == (2 - 4 - V) * _closed(2, f)


def test_free_energy_identities_that_hold(quartic, genus2):
    assert (genus2["F"] - genus2["F_shift"]).is_zero()
    assert (genus2["Fx"] - genus2["Fx_ydx"]).is_zero()
    rcomb = rest_combination(quartic[1], genus2["rest"])
    assert (genus2["comb"] - rcomb).is_zero()
    # the two residue forms differ by the Gaussian constant only
    diff = genus2["F"] - genus2["Fx"]
    assert diff.items() == [(0, Q(1, 120))]


def test_literal_residue_identity_fails_by_the_closed_series(genus2):
    # (2-2g) F differs from the Map combination: V * N_V plus the Gaussian constant
    diff = genus2["F"] - genus2["comb"]
    assert diff.coeff(0) == Q(1, 120)
    assert diff.coeff(6) == 1 * _closed(2, 3)
    assert diff.coeff(8) == 2 * _closed(2, 4)


def test_empty_rest_is_an_error(quartic):
    _, x, _, ex = quartic
    with pytest.raises(OrderExhausted):
        rest_coefficients(x, ex.omega(2, 1), 0)
    with pytest.raises(OrderExhausted):
        rest_combination(x, [])


def test_free_energy_rejects_low_genus(quartic):
    o, _, eo, _ = quartic
    with pytest.raises(ValueError):
        free_energy(o, 1, eo.omega(1, 1))


# ---- functional relations ----------------------------------------------------------------


@pytest.mark.parametrize("which", ["quartic12", "cubic12"])
def test_relations_hold(request, which):
    o, x, eo, ex = request.getfixturevalue(which)
    checks = list(check_disc_inversion(o, x, 8)) + [check_cylinder_relation(o, x, 5),
                                            check_pants_relation(o, x, eo.omega(0, 3), ex.omega(0, 3))]
    for r in checks:
        assert r.ok, (r.name, r.detail)
        assert r.checked > 0

"""Map counts, free energies and functional identities read off the multidifferentials.

Each boundary slot is expanded near theta = infinity (phi = infinity on the
exchanged curve) in a local coordinate z:

* ordinary maps use z = c / x, so x^(-k-1) dx = -c^(-k) z^(k-1) dz;
* fully simple maps use z = y, the cover of the exchanged curve.

Counts come out as series in beta = alpha^(-1/2); each beta power fixes the
number of vertices, and for a potential with a single coupling t_j it also
fixes the number of internal faces, so entries are stored per (V, profile).
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from math import factorial

from gmpy2 import mpq

from .counts import CountTable, euler_vertices
from .curve import LaurentPoly, SpectralCurve, eval_laurent
from .errors import InsufficientLocalOrder, OrderExhausted, PrecisionError
from .exactring import EXACT, LocalSeries, MPoly, Poly, TruncatedSeries, trace_sum
from .powerseries import (
    ZERO,
    bs_log_mixed,
    ps_compose,
    ps_derivative,
    ps_inv,
    ps_mul,
    ps_powers,
    ps_revert,
)
from .tr import MultiDiff, TREngine

TS = TruncatedSeries


def alpha_power(k):
    """alpha^k as an exact series in beta."""
    return TS.monomial(1, -2 * k)


# ---- local charts at infinity -------------------------------------------------------


@dataclass
class Chart:
    """v = 1/(curve coordinate) as a series in the local coordinate z, plus dv/dz."""

    v: list
    dv: list
    n: int


def ordinary_chart(curve: SpectralCurve, n: int) -> Chart:
    """z = c/x with x = a + c(theta + 1/theta) and v = 1/theta: z = v / (1 + (a/c) v + v^2)."""
    a, c = curve.a, curve.c
    aoc = a * c.invert(laurent=True)
    den = [TS.constant(1), aoc, TS.constant(1)] + [ZERO] * max(n - 3, 0)
    z_of_v = [ZERO] + ps_inv(den[: max(n, 3)], n)[: n - 1]
    v = ps_revert(z_of_v, n)
    return Chart(v, ps_derivative(v) + [ZERO], n)


def exchanged_chart(curve: SpectralCurve, n: int) -> Chart:
    """z = y = sum_k ytil_k v^k with v = 1/phi."""
    y_of_v = [ZERO] * n
    for k, cf in curve.cover.terms.items():
        if -k < n:
            y_of_v[-k] = cf
    v = ps_revert(y_of_v, n)
    return Chart(v, ps_derivative(v) + [ZERO], n)


def chart_for(curve: SpectralCurve, n: int) -> Chart:
    return ordinary_chart(curve, n) if curve.role == "ordinary" else exchanged_chart(curve, n)


class _SlotExpander:
    """Series in z of theta^e / P(theta)^d dtheta / dz near theta = infinity."""

    def __init__(self, P: Poly, chart: Chart):
        self.P = P
        self.chart = chart
        self.n = chart.n
        dP = P.degree
        self.dP = dP
        n = self.n
        rev = [P.coeff(dP - j) if dP - j >= 0 else ZERO for j in range(n)]
        self._rev_inv = ps_inv([x if isinstance(x, TS) else TS.constant(x) for x in rev], n)
        self._rev_pows = {0: [TS.constant(1)] + [ZERO] * (n - 1)}
        self._vpows = ps_powers(chart.v, n - 1, n)
        self._cache = {}

    def _rev_pow(self, d):
        if d not in self._rev_pows:
            self._rev_pows[d] = ps_mul(self._rev_pow(d - 1), self._rev_inv, self.n)
        return self._rev_pows[d]

    def series(self, e, d):
        key = (e, d)
        if key in self._cache:
            return self._cache[key]
        n = self.n
        m = d * self.dP - e - 2
        if m < 0:
            raise PrecisionError(f"theta^{e}/P^{d} has a pole at infinity")
        g = self._rev_pow(d)
        acc = [ZERO] * n
        for p in range(m, n):
            cf = g[p - m]
            if cf.is_exact_zero():
                continue
            vp = self._vpows[p]
            for i in range(n):
                acc[i] = acc[i] - cf * vp[i]
        out = ps_mul(acc, self.chart.dv, n)
        self._cache[key] = out
        return out


def raw_coefficients(md: MultiDiff, chart: Chart, K: int, ks=None):
    """{(k_1..k_n): [prod z_i^(k_i - 1)] md / prod dz_i} for 1 <= k_i <= K."""
    if md.is_special():
        raise ValueError("initial data are expanded by dedicated routines")
    if K > chart.n:
        raise OrderExhausted(f"chart has {chart.n} terms, {K} requested")
    exp = _SlotExpander(md.modulus, chart)
    wanted = [tuple(ks)] if ks is not None else list(product(range(1, K + 1), repeat=md.n))
    out = {k: ZERO for k in wanted}
    for mono, cf in md.numer.terms.items():
        slot = [exp.series(mono[i], md.dens[i]) for i in range(md.n)]
        for k in wanted:
            term = cf
            for i in range(md.n):
                s = slot[i][k[i] - 1]
                if s.is_exact_zero():
                    term = None
                    break
                term = term * s
            if term is not None:
                out[k] = out[k] + term
    return out


# ---- grading into tables --------------------------------------------------------------


def _single_coupling(curve):
    t = curve.potential.t
    return t[0] if len(t) == 1 else None


def faces_for(V, g, ks, coupling):
    """Internal-face profile for a single coupling (j, t_j), or None if impossible."""
    j, _ = coupling
    base = 2 - 2 * g - len(ks) + mpq(sum(ks), 2)
    num = V - base
    step = mpq(j - 2, 2)
    f = num / step
    if f < 0 or f.denominator != 1:
        return None
    return int(f)


def grade_series(series: TS, g, ks, curve, kind, table=None):
    """Distribute the beta-coefficients of one count series into a CountTable."""
    if table is None:
        table = CountTable(kind, g, tuple(ks))
    coupling = _single_coupling(curve)
    for e, cf in series.items():
        if e % 2:
            raise ArithmeticError(f"odd beta power {e} in an extracted count")
        V = e // 2 + 2 - 2 * g
        if coupling is None:
            if curve.potential.t:
                table.add(V, None, cf)
            else:
                table.add(V, (), cf)
            continue
        f = faces_for(V, g, ks, coupling)
        if f is None:
            raise ArithmeticError(f"beta power {e} matches no face count for {ks}")
        j, tj = coupling
        table.add(V, ((j, f),), cf / tj ** f)
    if series.prec is not None:
        lim = series.prec // 2 + 2 - 2 * g + (series.prec % 2)
        table.v_limit = lim if table.v_limit is None else min(table.v_limit, lim)
    return table


# ---- the disc and the cylinder --------------------------------------------------------


def ordinary_disc_series(curve: SpectralCurve, K: int):
    """[Map_{0;(k)} for k = 0..K] as beta series: alpha^2 [xi^(k+1)] y with xi = 1/x."""
    n = K + 2
    ch = ordinary_chart(curve, n)
    y = [ZERO] * n
    for k, cf in curve.cofunction.terms.items():
        if k > 0:
            raise ArithmeticError("cofunction has a positive power of theta")
        if -k < n:
            y[-k] = cf
    yz = ps_compose(y, ch.v, n)
    c = curve.c
    out = []
    for k in range(K + 1):
        out.append((yz[k + 1] * c ** (k + 1)).shift(-4))
    return out


def fs_disc_series(curve: SpectralCurve, K: int):
    """[FSMap_{0;(k)} for k = 0..K]: alpha^(2-k) [y^(k-1)] x on the exchanged curve."""
    n = K + 2
    ch = exchanged_chart(curve, n)
    # x = a + S/v + v, and 1/v = (1/z) / (v/z)
    vz = ch.v[1:] + [ZERO]
    inv = ps_inv(vz, n)
    S = curve.disc.S
    x = [S * inv[0]]
    for i in range(1, n):
        x.append(S * inv[i] + ch.v[i - 1] + (curve.a if i == 1 else ZERO))
    # x[i] is the coefficient of z^(i-1)
    return [x[k] * alpha_power(2 - k) for k in range(K + 1)]


def ordinary_cylinder_series(curve: SpectralCurve, K: int):
    """{(k1, k2): Map_{0;(k1,k2)}} from log((v1 - v2)/(z1 - z2)) in the ordinary chart."""
    L = _cylinder_log(ordinary_chart(curve, 2 * K + 2), K + 1)
    c = curve.c
    out = {}
    for k1 in range(1, K + 1):
        for k2 in range(1, K + 1):
            out[(k1, k2)] = (L[k1][k2] * (k1 * k2) * c ** (k1 + k2)).shift(-4)
    return out


def fs_cylinder_series(curve: SpectralCurve, K: int):
    """{(k1, k2): FSMap_{0;(k1,k2)}} from log((v1 - v2)/(y1 - y2)) in the exchanged chart."""
    L = _cylinder_log(exchanged_chart(curve, 2 * K + 2), K + 1)
    out = {}
    for k1 in range(1, K + 1):
        for k2 in range(1, K + 1):
            out[(k1, k2)] = L[k1][k2] * (k1 * k2) * alpha_power(2 - k1 - k2)
    return out


def _cylinder_log(ch: Chart, n):
    """Mixed coefficients of log H, H = (v(z1) - v(z2)) / (z1 - z2)."""
    v = ch.v
    if len(v) < 2 * n:
        raise OrderExhausted("chart too short for the cylinder expansion")
    H = [[ZERO] * n for _ in range(n)]
    for m in range(1, len(v)):
        for p in range(m):
            q = m - 1 - p
            if p < n and q < n:
                H[p][q] = H[p][q] + v[m]
    return bs_log_mixed(H, n)


# ---- public extraction ----------------------------------------------------------------


def _engine(curve, engine):
    if engine is None:
        return TREngine(curve)
    if engine.curve is not curve:
        raise ValueError("engine was built on a different curve")
    return engine


def map_count_series(curve: SpectralCurve, g, ks, engine=None):
    """Map_{g;(k)} as one beta series."""
    ks = tuple(ks)
    n = len(ks)
    if curve.role != "ordinary":
        raise ValueError("ordinary counts need the ordinary curve")
    if (g, n) == (0, 1):
        return ordinary_disc_series(curve, ks[0])[ks[0]]
    if (g, n) == (0, 2):
        return ordinary_cylinder_series(curve, max(ks))[ks]
    K = max(ks)
    md = _engine(curve, engine).omega(g, n)
    raw = raw_coefficients(md, ordinary_chart(curve, K + 1), K, ks)[ks]
    sign = -1 if n % 2 else 1
    return (raw * curve.c ** sum(ks) * sign).shift(-2 * (2 - 2 * g))


def fsmap_count_series(curve: SpectralCurve, g, ks, engine=None):
    """FSMap_{g;(k)} as one beta series."""
    ks = tuple(ks)
    n = len(ks)
    if curve.role != "exchanged":
        raise ValueError("fully simple counts need the exchanged curve")
    if (g, n) == (0, 1):
        return fs_disc_series(curve, ks[0])[ks[0]]
    if (g, n) == (0, 2):
        return fs_cylinder_series(curve, max(ks))[ks]
    K = max(ks)
    md = _engine(curve, engine).omega(g, n)
    raw = raw_coefficients(md, exchanged_chart(curve, K + 1), K, ks)[ks]
    return raw * alpha_power(2 - 2 * g - sum(ks))


def extract_map_counts(curve: SpectralCurve, g, ks, engine=None) -> CountTable:
    s = map_count_series(curve, g, ks, engine)
    return grade_series(s, g, ks, curve, "ordinary")


def extract_fsmap_counts(curve: SpectralCurve, g, ks, engine=None) -> CountTable:
    s = fsmap_count_series(curve, g, ks, engine)
    return grade_series(s, g, ks, curve, "fully_simple")


# ---- local data at the ramification points ----------------------------------------------


class RamLocal:
    """Expansions in s = theta - u at every root u of the curve's ramification polynomial."""

    def __init__(self, curve: SpectralCurve, order: int):
        self.curve = curve
        self.R = curve.ring()
        self.order = order
        u = self.R.gen()
        self.zero = self.R.zero()
        self.one = self.R.one()
        self.th = LocalSeries([u, self.one], 0, EXACT, self.zero).truncate(order)
        self.th_inv = self.th.inverse()

    def laurent(self, lp: LaurentPoly):
        return eval_laurent(lp, self.th, self.th_inv)

    def poly(self, P):
        acc = LocalSeries([], 0, EXACT, self.zero)
        pw = LocalSeries([self.one], 0, EXACT, self.zero)
        for c in P.coeffs:
            acc = acc + pw.scale(c)
            pw = pw * self.th
        return acc.truncate(self.order)

    def omega(self, md: MultiDiff):
        """Local density of a one-point form, numerator / P^d."""
        if md.n != 1 or md.is_special():
            raise ValueError("expects a regular one-point form")
        d = md.dens[0]
        num = LocalSeries([], 0, EXACT, self.zero)
        pw = LocalSeries([self.one], 0, EXACT, self.zero)
        deg = max((e[0] for e in md.numer.terms), default=0)
        for e in range(deg + 1):
            c = md.numer.terms.get((e,))
            if c is not None:
                num = num + pw.scale(c)
            pw = pw * self.th
        num = num.truncate(self.order)
        if d == 0:
            return num
        p = self.poly(md.modulus).drop_leading(1)
        return num * p.inverse() ** d


def _primitive(ls: LocalSeries):
    """Term-by-term primitive vanishing at s = 0 (the ramification point)."""
    if ls.val < 0 and any(not c.is_zero() for c in ls.coeffs[: -ls.val]):
        raise InsufficientLocalOrder("integrand has a pole at the ramification point")
    cs = []
    lo = max(ls.val, 0)
    for k in range(lo, ls.prec):
        cs.append(ls.coeff(k) * mpq(1, k + 1))
    return LocalSeries(cs, lo + 1, ls.prec + 1, ls.zero)


def _trace_residue(F: LocalSeries, W: LocalSeries):
    if -1 >= (F * W).prec:
        raise InsufficientLocalOrder("local expansions too short for the residue")
    return trace_sum((F * W).residue())


def _local_order(md):
    return 2 * md.dens[0] + 6


# ---- free energies -----------------------------------------------------------------


@dataclass
class FreeEnergy:
    g: int
    role: str
    value: TS  # (2 - 2g) F_g, in the normalization of the count tables

    def to_json(self):
        return {"g": self.g, "curve": self.role, "value": self.value.to_dict(),
                "precision": self.value.prec}


def free_energy(curve: SpectralCurve, g: int, omega_g1: MultiDiff, basepoint=None) -> FreeEnergy:
    """(2 - 2g) F_g = sum over ramification points of Res (int_rho omega01) omega_{g,1}.

    ``basepoint`` adds a constant to the primitive, i.e. integrates from
    another point; by the zero-residue property the value cannot change.
    The result carries the factor alpha^(2-2g) used for the count tables.
    """
    if g < 2:
        raise ValueError("free energies are defined for g >= 2")
    loc = RamLocal(curve, _local_order(omega_g1))
    w01 = loc.laurent(curve.cofunction * curve.cover.derivative())
    prim = _primitive(w01)
    if basepoint is not None:
        prim = prim + LocalSeries([loc.one * basepoint], 0, EXACT, loc.zero)
    val = _trace_residue(prim, loc.omega(omega_g1))
    return FreeEnergy(g, curve.role, val * alpha_power(2 - 2 * g))


def free_energy_via_ydx(curve: SpectralCurve, g: int, omega_g1: MultiDiff) -> TS:
    """On the exchanged curve: -sum Res (int y dx) omega_{g,1}, equal by x dy = -y dx + d(xy)."""
    loc = RamLocal(curve, _local_order(omega_g1))
    ydx = loc.laurent(curve.cover * curve.cofunction.derivative())
    val = _trace_residue(_primitive(ydx), loc.omega(omega_g1))
    return -val * alpha_power(2 - 2 * g)


def map_combination(curve: SpectralCurve, g: int, engine=None):
    """-Map_{g;(2)}/2 + sum_k t_k Map_{g;(k)}/k."""
    eng = _engine(curve, engine)
    acc = map_count_series(curve, g, (2,), eng) * mpq(-1, 2)
    for j, tj in curve.potential.t:
        acc = acc + map_count_series(curve, g, (j,), eng) * (tj / j)
    return acc


def rest_coefficients(curve: SpectralCurve, omega_g1: MultiDiff, K: int):
    """[Rest_{g,(k)} for k = 1..K]: expansion of the exchanged omega_{g,1} near phi = 0 in dx/x^(k+1)."""
    if curve.role != "exchanged":
        raise ValueError("Rest coefficients live on the exchanged curve")
    if K < 1:
        raise OrderExhausted("no Rest coefficient requested")
    g = omega_g1.g
    n = K + 1
    # xi = 1/x = phi / (1 + a phi + S phi^2)
    den = [TS.constant(1), curve.a, curve.disc.S] + [ZERO] * max(n - 3, 0)
    xi_of_phi = [ZERO] + ps_inv(den[: max(n, 3)], n)[: n - 1]
    phi = ps_revert(xi_of_phi, n)
    dphi = ps_derivative(phi) + [ZERO]
    P = omega_g1.modulus
    d = omega_g1.dens[0]
    Pser = [P.coeff(i) if i <= P.degree else ZERO for i in range(n)]
    dens_inv = ps_inv(Pser, n)
    f = [ZERO] * n
    for (e,), cf in omega_g1.numer.terms.items():
        if e < n:
            f[e] = f[e] + cf
    for _ in range(d):
        f = ps_mul(f, dens_inv, n)
    fz = ps_mul(ps_compose(f, phi, n), dphi, n)
    scale = alpha_power(2 - 2 * g)
    return [-(fz[k - 1] * scale) for k in range(1, K + 1)]


def rest_combination(curve: SpectralCurve, rest):
    """-Rest_2/2 + sum_k t_k Rest_k/k (the couplings multiply each Rest_k)."""
    need = max([2] + [j for j, _ in curve.potential.t])
    if len(rest) < need:
        raise OrderExhausted(f"{len(rest)} Rest coefficients given, {need} needed")
    acc = rest[1] * mpq(-1, 2)
    for j, tj in curve.potential.t:
        acc = acc + rest[j - 1] * (tj / j)
    return acc


# ---- pointwise properties ---------------------------------------------------------


def loop_equation_holds(md: MultiDiff) -> bool:
    """omega(theta) + omega(1/theta) = 0 for a one-point form on the ordinary curve."""
    if md.role != "ordinary" or md.n != 1:
        raise ValueError("the linear loop equation is stated for ordinary one-point forms")
    d = md.dens[0]
    top = 2 * d - 2
    sign = -1 if d % 2 else 1
    for (e,), cf in md.numer.terms.items():
        if e > top:
            return False
    for e in range(top + 1):
        a = md.numer.terms.get((e,), TS())
        b = md.numer.terms.get((top - e,), TS())
        if not (a - b * sign).is_zero():
            return False
    return True


def residues_vanish(curve: SpectralCurve, md: MultiDiff) -> bool:
    """Res at every ramification point is zero as an element of the quotient ring."""
    loc = RamLocal(curve, _local_order(md))
    return loc.omega(md).residue().is_zero()


def xy_residue_sum(curve: SpectralCurve, md: MultiDiff) -> TS:
    """sum over ramification points of Res x y omega; vanishes on the exchanged curve."""
    loc = RamLocal(curve, _local_order(md))
    xy = loc.laurent(curve.cover * curve.cofunction)
    return _trace_residue(xy, loc.omega(md))


# ---- genus-one quadrangulations in closed form -------------------------------------


def _sqrt_1_minus_12t(n):
    """Coefficients of sqrt(1 - 12 t) modulo t^n."""
    out = [mpq(1)]
    for k in range(1, n):
        # ratio of consecutive terms of binom(1/2, k) (-12)^k
        out.append(out[-1] * mpq(3 - 2 * k, 2 * k) * (-12))
    return out


def _qmul(A, B, n):
    out = [mpq(0)] * n
    for i, a in enumerate(A[:n]):
        if a:
            for j, b in enumerate(B[: n - i]):
                out[i + j] += a * b
    return out


def _phi_m(m, n):
    """c^(2m) (1 + (m - 1) s) / (1 - 12 t), c^2 = (1 - s)/(6t), s = sqrt(1 - 12t), mod t^n."""
    s = _sqrt_1_minus_12t(n + 1)
    c2 = [-s[i + 1] / 6 for i in range(n)]
    acc = [mpq(1)] + [mpq(0)] * (n - 1)
    for _ in range(m):
        acc = _qmul(acc, c2, n)
    num = [(m - 1) * x for x in s[:n]]
    num[0] += 1
    geo = [mpq(12) ** i for i in range(n)]
    return _qmul(_qmul(acc, num, n), geo, n)


def genus1_quadrangulation_closed_form(kind, m, n):
    """t4-coefficients [t^0..t^(n-1)] of the closed genus-one quartic formulas.

    ordinary: Map_{1;(2m+2)} = (2m+1)! / (6 m!^2) phi_m
    fully simple: FSMap_{1;(2m)} = (3m)! t^(m+1) / (4 m! (2m-1)!) phi_{3m+1}
    """
    if kind == "ordinary":
        if m < 0:
            raise ValueError("m >= 0")
        pref = mpq(factorial(2 * m + 1), 6 * factorial(m) ** 2)
        return [pref * x for x in _phi_m(m, n)]
    if kind == "fully_simple":
        if m < 1:
            raise ValueError("m >= 1")
        pref = mpq(factorial(3 * m), 4 * factorial(m) * factorial(2 * m - 1))
        body = _phi_m(3 * m + 1, n)
        return [mpq(0)] * min(m + 1, n) + [pref * x for x in body[: max(n - m - 1, 0)]]
    raise ValueError(f"unknown kind {kind!r}")


def closed_form_vs_table(table: CountTable, kind, m):
    """Pairs (f, closed form, extracted) for every face count the table resolves."""
    if table.v_limit is None:
        raise ValueError("table carries no precision bound")
    out = []
    fmax = 0
    for (V, prof), _ in table.entries.items():
        if prof is None:
            raise ValueError("table is not graded by a single coupling")
    # V = 2 - 2g - 1 + k/2 + f for quartic faces
    k = 2 * m + 2 if kind == "ordinary" else 2 * m
    base = -1 + k // 2
    fmax = table.v_limit - base - 1
    cf = genus1_quadrangulation_closed_form(kind, m, max(fmax + 1, 0))
    for f in range(fmax + 1):
        out.append((f, cf[f], table.get(((4, f),)) if f else table.get(())))
    return out


# ---- functional relations ---------------------------------------------------------


@dataclass
class RelationCheck:
    name: str
    ok: bool
    checked: int  # number of coefficients compared
    precision: int | None  # lowest beta precision among compared differences
    detail: str = ""

    def to_json(self):
        return {"name": self.name, "ok": self.ok, "checked": self.checked,
                "precision": self.precision, "detail": self.detail}


def _diff_report(name, diffs):
    bad = [(where, d) for where, d in diffs if not d.is_zero()]
    precs = [d.prec for _, d in diffs if d.prec is not None]
    if precs and min(precs) <= 0:
        raise PrecisionError(f"{name}: no known coefficients left to compare")
    detail = "" if not bad else f"first mismatch at {bad[0][0]}: {bad[0][1]}"
    return RelationCheck(name, not bad, len(diffs), min(precs) if precs else None, detail)


def _w_of_xi(ordinary: SpectralCurve, n):
    """w = alpha^-1 W01(x) in xi = 1/x, coefficients of xi^0..xi^(n-1)."""
    disc = ordinary_disc_series(ordinary, n - 2)
    ainv = alpha_power(-1)
    w = [ZERO] + [m * ainv for m in disc]
    if not (w[1] - TS.constant(1)).is_zero():
        raise ArithmeticError("Map_{0;(0)} is not alpha")
    return w[:n]


def check_disc_inversion(ordinary: SpectralCurve, exchanged: SpectralCurve, K: int):
    """Both compositions: X01(W01(x)/alpha) = alpha x and W01(X01(w)/alpha) = alpha w."""
    al = alpha_power(1)
    ainv = alpha_power(-1)
    fs = fs_disc_series(exchanged, K)
    maps = ordinary_disc_series(ordinary, K)
    n = K + 1
    # first: xi X01(u(xi)) = alpha/q + sum_k FSMap_k xi u^(k-1), q = u/xi
    u = _w_of_xi(ordinary, n + 1)
    q = u[1:]
    E = [c * al for c in ps_inv(q, n)]
    upow = ps_powers(u, K, n)
    for k in range(1, K + 1):
        term = [ZERO] + upow[k - 1][: n - 1]
        E = [E[i] + term[i] * fs[k] for i in range(n)]
    diffs = [((f"xi^{i - 1}",), E[i] - (al if i == 0 else ZERO)) for i in range(n)]
    first = _diff_report("disc inversion x->w->x", diffs)
    # second: 1/t = w h^-1 with h = 1 + alpha^-1 sum_k FSMap_k w^k; sum Map_k (w/h)^(k+1) = alpha w
    h = [TS.constant(1)] + [fs[k] * ainv for k in range(1, n)]
    tinv = [ZERO] + ps_inv(h, n)
    tpow = ps_powers(tinv, n, n + 1)
    acc = [ZERO] * (n + 1)
    for k in range(K + 1):
        acc = [acc[i] + tpow[k + 1][i] * maps[k] for i in range(n + 1)]
    diffs = [((f"w^{i}",), acc[i] - (al if i == 1 else ZERO)) for i in range(n + 1)]
    second = _diff_report("disc inversion w->x->w", diffs)
    return [first, second]


def check_cylinder_relation(ordinary: SpectralCurve, exchanged: SpectralCurve, K: int):
    """W02 dx dx + alpha^2 dx dx/(x1-x2)^2 = X02 dw dw + alpha^2 dw dw/(w1-w2)^2, coefficients up to xi^K."""
    n = K + 1
    maps = ordinary_cylinder_series(ordinary, n)
    fs = fs_cylinder_series(exchanged, n)
    u = _w_of_xi(ordinary, 2 * n + 3)
    du = ps_derivative(u)[:n]
    upow = ps_powers(u, n, n)
    A = {k: ps_mul(upow[k - 1], du, n) for k in range(1, n + 1)}
    rhs = [[ZERO] * n for _ in range(n)]
    for k1 in range(1, n + 1):
        for k2 in range(1, n + 1):
            cf = fs[(k1, k2)]
            for i in range(n):
                if A[k1][i].is_exact_zero():
                    continue
                for j in range(n):
                    rhs[i][j] = rhs[i][j] + cf * A[k1][i] * A[k2][j]
    L = _cylinder_log(Chart(u, [], len(u)), n + 1)
    a2 = alpha_power(2)
    diffs = []
    for i in range(n):
        for j in range(n):
            r = rhs[i][j] + L[i + 1][j + 1] * ((i + 1) * (j + 1)) * a2
            diffs.append(((i + 1, j + 1), maps[(i + 1, j + 1)] - r))
    return _diff_report("cylinder relation", diffs)


def _upoly(P: Poly, i, n):
    terms = {}
    for k, c in enumerate(P.coeffs):
        if not c.is_exact_zero():
            e = [0] * n
            e[i] = k
            terms[tuple(e)] = c
    return MPoly(terms, n)


def _theta_numerator(md: MultiDiff, c: TS, deg: int):
    """Numerator of an exchanged form after phi = theta/c, over the monic theta denominators."""
    cinv = c.invert(laurent=True)
    lift = sum(deg * d for d in md.dens) - md.n
    out = {}
    for e, cf in md.numer.terms.items():
        out[e] = cf * cinv ** sum(e) * c ** lift if lift >= 0 else cf * cinv ** (sum(e) - lift)
    return MPoly(out, md.n)


def check_pants_relation(ordinary: SpectralCurve, exchanged: SpectralCurve, omega03: MultiDiff, chi03: MultiDiff):
    """omega03 + chi03 = sum_i d_i [omega02(z_i, z_j) omega02(z_i, z_k) / (dx(z_i) dy(z_i))].

    Both forms are brought to theta = c phi and to the common denominator
    prod (theta_i^2 - 1)^2 P(theta_i)^2 Delta^3 with Delta the Vandermonde
    product, then the numerators are compared term by term.
    """
    n = 3
    c = ordinary.c
    Pt = exchanged.ram_poly_theta()
    r = exchanged.potential.r
    one = TS.constant(1)
    sq = Poly([-one, ZERO, one], "theta")
    # dx dy = -c (theta^2 - 1) M(theta) / theta^(r+3) with M = m P and m its leading coefficient
    m = ordinary.cofunction.coeff(-1)
    Rt = sq * Pt
    mono = lambda k: Poly([ZERO] * k + [one], "theta")
    Q1 = mono(r + 2) * Rt * (r + 3) - mono(r + 3) * Rt.derivative()
    Q2 = mono(r + 3) * Rt * 2
    th = [MPoly.variable(i, n, one) for i in range(n)]
    R2 = [_upoly(Rt * Rt, i, n) for i in range(n)]
    cube = lambda p: p * p * p
    NT = MPoly({}, n)
    for i in range(n):
        j, k = [x for x in range(n) if x != i]
        U = _upoly(Q1, i, n) * (th[i] - th[j]) * (th[i] - th[k]) - _upoly(Q2, i, n) * (th[i] * 2 - th[j] - th[k])
        # (theta_i - theta_j)^3 (theta_i - theta_k)^3 against Delta^3
        lo, hi = (j, k)
        sign = 1 if i != 1 else -1
        NT = NT + U * R2[j] * R2[k] * cube(th[lo] - th[hi]) * sign
    # left side over prod (theta^2-1)^a P^b
    a, b = omega03.dens, chi03.dens
    N2 = _theta_numerator(chi03, c, Pt.degree)
    A = omega03.numer
    for i in range(n):
        for _ in range(b[i]):
            A = A * _upoly(Pt, i, n)
    B = N2
    for i in range(n):
        for _ in range(a[i]):
            B = B * _upoly(sq, i, n)
    A = A + B
    lhs = A * (-(c * m))
    for i in range(n):
        for _ in range(max(a[i], 2) - a[i]):
            lhs = lhs * _upoly(sq, i, n)
        for _ in range(max(b[i], 2) - b[i]):
            lhs = lhs * _upoly(Pt, i, n)
        for _ in range(max(a[i], 2) - 2):
            NT = NT * _upoly(sq, i, n)
        for _ in range(max(b[i], 2) - 2):
            NT = NT * _upoly(Pt, i, n)
    delta = (th[0] - th[1]) * (th[0] - th[2]) * (th[1] - th[2])
    lhs = lhs * cube(delta)
    diff = lhs - NT
    diffs = [(e, cf) for e, cf in diff.terms.items()]
    return _diff_report("pants relation", diffs)


# ---- comparison with the census ----------------------------------------------------


@dataclass
class OracleComparison:
    kind: str
    g: int
    ks: tuple
    compared: list  # (V, profile, tr value, census value)
    unresolved: list  # profiles beyond the truncation of the table

    @property
    def mismatches(self):
        return [row for row in self.compared if row[2] != row[3]]

    @property
    def ok(self):
        return not self.mismatches


def compare_with_oracle(table: CountTable, curve: SpectralCurve, cap=None) -> OracleComparison:
    """Census counts against every table entry the truncation resolves, up to ``cap`` oriented edges."""
    from . import census

    cap = census.DEFAULT_EDGE_CAP if cap is None else cap
    coupling = _single_coupling(curve)
    if coupling is None and curve.potential.t:
        raise ValueError("oracle comparison needs a single coupling to resolve face profiles")
    degrees = (coupling[0],) if coupling else (3,)
    max_faces = cap
    rows, skipped = [], []
    kind = "fully_simple" if table.kind == "fully_simple" else "ordinary"
    for prof in census.profiles_for(table.ks, degrees, max_faces, cap):
        if not coupling and prof:
            continue
        V = euler_vertices(table.g, table.ks, prof)
        if V is None or V < 1:
            continue
        if table.v_limit is not None and V >= table.v_limit:
            skipped.append(prof)
            continue
        tr_val = table.entries.get((V, prof), mpq(0))
        oracle = census.count_profile(table.g, table.ks, dict(prof), kind=kind, cap=cap)[kind]
        rows.append((V, prof, tr_val, oracle))
    return OracleComparison(table.kind, table.g, table.ks, rows, skipped)

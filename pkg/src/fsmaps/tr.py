"""Multidifferentials in canonical rational form and the recursion that builds them.

A regular multidifferential is stored as

    numerator(z_1..z_n) / prod_i P(z_i)^{d_i}  dz_1 ... dz_n

with P the curve's ramification polynomial.  The residue at every root of P
is computed at once by expanding in s = z - u, where u is the root symbol of
the quotient ring K[u]/P(u), and summing over roots is a trace.

Spectator variables z_j stay symbolic.  A lower form contributes polynomial
dependence ``z_j^e / P(z_j)^d``, while the Bergman kernel contributes powers of
``q_j = 1/(z_j - u)``, which become ``Q(z_j, u)^e / P(z_j)^e`` with
``Q(z, u) = (P(z) - P(u)) / (z - u)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .curve import LaurentPoly, RamData, SpectralCurve, deck_expansion, eval_laurent
from .errors import InsufficientLocalOrder, PoleAtExpansionPoint, PrecisionError, TruncationMismatch
from .exactring import EXACT, LocalSeries, MPoly, Poly, TruncatedSeries, trace_sum

TS = TruncatedSeries


def pole_bound(g, n):
    return 2 * (3 * g - 2 + n)


@dataclass
class MultiDiff:
    g: int
    n: int
    role: str
    modulus: Poly | None
    dens: tuple = ()
    numer: MPoly | None = None
    special: str | None = None  # "omega01" / "omega02" for the initial data
    density: LaurentPoly | None = None  # omega01 = density(z) dz

    def is_special(self):
        return self.special is not None

    def shifted(self, k):
        """Multiply by beta^k."""
        return MultiDiff(self.g, self.n, self.role, self.modulus, self.dens,
                         self.numer.map_coeffs(lambda c: c.shift(k)))

    def permuted(self, perm):
        if self.special == "omega02" or self.special == "omega01":
            return self
        return MultiDiff(self.g, self.n, self.role, self.modulus,
                         tuple(self.dens[p] for p in perm), self.numer.permute(perm))

    def min_prec(self):
        return min((c.prec for c in self.numer.terms.values() if c.prec is not None), default=None)

    def to_json(self):
        if self.special == "omega02":
            return {"g": 0, "n": 2, "curve": self.role, "special": "omega02"}
        if self.special == "omega01":
            return {"g": 0, "n": 1, "curve": self.role, "special": "omega01",
                    "density": self.density.to_json()}
        terms = [{"exponents": list(e), "coefficient": c.to_dict(), "precision": c.prec}
                 for e, c in sorted(self.numer.terms.items())]
        return {
            "g": self.g,
            "n": self.n,
            "curve": self.role,
            "denominator_exponents": list(self.dens),
            "ram_poly": [c.to_dict() for c in self.modulus.coeffs],
            "numerator": terms,
        }


def omega01(curve: SpectralCurve) -> MultiDiff:
    dens = curve.cofunction * curve.cover.derivative()
    return MultiDiff(0, 1, curve.role, curve.ram_poly, special="omega01", density=dens)


def omega02(role="any") -> MultiDiff:
    return MultiDiff(0, 2, role, None, special="omega02")


# ---- polynomial helpers in one variable with TS / quotient coefficients ----------


def _poly_mul(A, B, zero):
    if not A or not B:
        return []
    out = [None] * (len(A) + len(B) - 1)
    for i, a in enumerate(A):
        for j, b in enumerate(B):
            p = a * b
            out[i + j] = p if out[i + j] is None else out[i + j] + p
    return [zero if x is None else x for x in out]


def _poly_add(A, B):
    if len(A) < len(B):
        A, B = B, A
    out = list(A)
    for i, b in enumerate(B):
        out[i] = out[i] + b
    return out


def divide_out_ram(numer: MPoly, dens, P: Poly):
    """Cancel factors P(z_i) from numerator and denominators where exact."""
    dens = list(dens)
    n = numer.nvars
    for i in range(n):
        while dens[i] > 0:
            q = _exact_div_in_var(numer, i, P)
            if q is None:
                break
            numer = q
            dens[i] -= 1
    return numer, tuple(dens)


def _exact_div_in_var(numer, i, P):
    """numer / P(z_i) if the remainder vanishes to known precision, else None."""
    parts = numer.as_univariate(i)
    if not parts:
        return numer
    n = numer.nvars
    dP = P.degree
    # collect per rest-monomial univariate polys
    rest = {}
    for k, mp in enumerate(parts):
        for e, c in mp.terms.items():
            rest.setdefault(e, {})[k] = c
    out = {}
    for e, col in rest.items():
        deg = max(col)
        r = [col.get(k, TS()) for k in range(deg + 1)]
        if deg < dP:
            if all(x.is_zero() for x in r):
                continue
            return None
        q = [TS()] * (deg - dP + 1)
        for k in range(deg - dP, -1, -1):
            f = r[k + dP]
            q[k] = f
            if f.is_exact_zero():
                continue
            for j in range(dP):
                r[k + j] = r[k + j] - f * P.coeffs[j]
            r[k + dP] = TS()
        if not all(x.is_zero() for x in r[:dP]):
            return None
        for k, c in enumerate(q):
            if not c.is_exact_zero():
                out[e[:i] + (k,) + e[i:]] = c
    return MPoly(out, n)


# ---- the recursion ------------------------------------------------------------------


class _LocalKit:
    """Local expansions at the ramification points shared by one recursion step."""

    def __init__(self, curve: SpectralCurve, rd: RamData):
        self.rd = rd
        self.R = rd.ring
        self.L = rd.order
        self.zero = self.R.zero()
        self.one = self.R.one()
        L = self.L
        u = rd.u
        self.th = rd.theta
        self.sg = rd.sigma.truncate(L)
        self.tau = rd.deck
        self.dtau = self.tau.derivative()
        P = curve.ram_poly
        self._th_pows = [self._const(self.one)]
        self._sg_pows = [self._const(self.one)]
        Pth = self._eval_poly(P, self.th_pow).drop_leading(1)
        Psg = self._eval_poly(P, self.sg_pow).drop_leading(1)
        self.pinv_th = [self._const(self.one), Pth.inverse()]
        self.pinv_sg = [self._const(self.one), Psg.inverse()]
        Y = curve.tr_cofunction
        X = curve.tr_cover
        dY = eval_laurent(Y, self.th, rd.theta_inv) - eval_laurent(Y, self.sg, rd.sigma_inv)
        dY = dY.drop_leading(1)
        Xp = eval_laurent(X.derivative(), self.th, rd.theta_inv).drop_leading(1)
        self.inv_den = (dY * Xp * 2).inverse()
        s_minus_tau = LocalSeries([self.one], 1, EXACT, self.zero) - self.tau
        self.inv_diag2 = (s_minus_tau * s_minus_tau).inverse()
        self._kern = {}
        self._tau_pows = [self._const(self.one)]
        # Q(z, u)^e reduced mod P(u), as polys in z with quotient coefficients
        self.P = P
        self.dP = P.degree
        Qc = []
        for j in range(self.dP):
            # coefficient of z^j in (P(z) - P(u)) / (z - u) is sum_{k>j} p_k u^(k-1-j)
            acc = self.zero
            for k in range(j + 1, self.dP + 1):
                acc = acc + (u ** (k - 1 - j)) * P.coeff(k)
            Qc.append(acc)
        self._Qpow = [[self.one], Qc]
        self._Ppow = [[TS.constant(1)], list(P.coeffs)]

    def _const(self, c):
        return LocalSeries([c], 0, EXACT, self.zero)

    def _eval_poly(self, P, pw):
        acc = LocalSeries([], 0, EXACT, self.zero)
        for k, c in enumerate(P.coeffs):
            acc = acc + pw(k).scale(c)
        return acc

    def th_pow(self, k):
        while len(self._th_pows) <= k:
            self._th_pows.append(self._th_pows[-1] * self.th)
        return self._th_pows[k]

    def sg_pow(self, k):
        while len(self._sg_pows) <= k:
            self._sg_pows.append(self._sg_pows[-1] * self.sg)
        return self._sg_pows[k]

    def tau_pow(self, k):
        while len(self._tau_pows) <= k:
            self._tau_pows.append(self._tau_pows[-1] * self.tau)
        return self._tau_pows[k]

    def pinv(self, which, d):
        lst = self.pinv_th if which == "th" else self.pinv_sg
        while len(lst) <= d:
            lst.append(lst[-1] * lst[1])
        return lst[d]

    def kernel(self, m):
        """(s^m - tau^m) / (2 dY X') for m >= 1."""
        if m not in self._kern:
            sm = LocalSeries([self.one], m, EXACT, self.zero)
            self._kern[m] = (sm - self.tau_pow(m)) * self.inv_den
        return self._kern[m]

    def Qpow(self, e):
        while len(self._Qpow) <= e:
            self._Qpow.append(_poly_mul(self._Qpow[-1], self._Qpow[1], self.zero))
        return self._Qpow[e]

    def Ppow(self, e):
        while len(self._Ppow) <= e:
            self._Ppow.append(_poly_mul(self._Ppow[-1], self._Ppow[1], TS()))
        return self._Ppow[e]


def _residue(K, B):
    """[s^-1] of K * B without forming the product."""
    acc = None
    for i, k in enumerate(K.coeffs):
        e = K.val + i
        j = -1 - e
        if j < B.val:
            break
        b = B.coeff(j)
        p = k * b
        acc = p if acc is None else acc + p
    # everything below K.val + len(K.coeffs) must be known in K
    need = -1 - B.val
    if need >= K.prec:
        raise PrecisionError("kernel expansion too short")
    return acc


class TREngine:
    """Runs the recursion on one curve, caching every computed omega_{g,n}."""

    def __init__(self, curve: SpectralCurve, local_order: int | None = None):
        self.curve = curve
        self.local_order = local_order
        self._norm = {}
        self._rd = None
        self._kit = None
        self.P = curve.ram_poly

    # public ---------------------------------------------------------------
    def omega(self, g, n) -> MultiDiff:
        if (g, n) == (0, 1):
            return omega01(self.curve)
        if (g, n) == (0, 2):
            return omega02(self.curve.role)
        numer, dens = self._normalized(g, n)
        shift = self.curve.omega_shift * (2 - 2 * g - n)
        md = MultiDiff(g, n, self.curve.role, self.P, dens, numer)
        return md.shifted(shift) if shift else md

    def normalized(self, g, n):
        return self._normalized(g, n)

    # internals ------------------------------------------------------------
    def _kit_for(self, bound):
        L = self.local_order or (2 * bound + 6)
        if self._kit is None or self._kit.L < L + 1:
            rd = deck_expansion(self.curve, L)
            self._kit = _LocalKit(self.curve, rd)
        return self._kit

    def _normalized(self, g, n):
        key = (g, n)
        if key not in self._norm:
            if 2 * g - 2 + n <= 0:
                raise ValueError("initial data are not regular forms")
            self._norm[key] = self._step(g, n)
        return self._norm[key]

    def _local_factor(self, kit, src, slots, nspec):
        """Expand a lower form with its first variable(s) at theta / sigma(theta).

        ``src`` is (g, n) of the lower form; ``slots`` lists, per variable of
        the lower form, "th", "sg" or the index of a spectator.  Returns
        {spectator key: LocalSeries}.
        """
        g, n = src
        if (g, n) == (0, 2):
            a, b = slots
            if {a, b} == {"th", "sg"}:
                return {(None,) * nspec: kit.inv_diag2}
            loc, j = (a, b) if isinstance(b, int) else (b, a)
            out = {}
            L = kit.L
            for m in range(0, L):
                key = [None] * nspec
                key[j] = ("q", m + 2)
                if loc == "th":
                    ser = LocalSeries([kit.one * (m + 1)], m, EXACT, kit.zero)
                else:
                    ser = kit.tau_pow(m).scale(kit.one * (m + 1)) if m else kit._const(kit.one)
                out[tuple(key)] = ser
            return out
        numer, dens = self._normalized(g, n)
        th_i = [i for i, s in enumerate(slots) if s == "th"]
        sg_i = [i for i, s in enumerate(slots) if s == "sg"]
        sp = [(i, s) for i, s in enumerate(slots) if isinstance(s, int)]
        groups = {}
        for e, c in numer.terms.items():
            skey = [None] * nspec
            for i, j in sp:
                skey[j] = ("p", e[i], dens[i])
            a = e[th_i[0]] if th_i else 0
            b = e[sg_i[0]] if sg_i else 0
            groups.setdefault(tuple(skey), {}).setdefault(b, {})[a] = c
        out = {}
        pref = None
        for i in th_i:
            f = kit.pinv("th", dens[i])
            pref = f if pref is None else pref * f
        for i in sg_i:
            f = kit.pinv("sg", dens[i])
            pref = f if pref is None else pref * f
        for skey, byb in groups.items():
            tot = None
            for b, bya in byb.items():
                acc = LocalSeries([], 0, EXACT, kit.zero)
                for a, c in bya.items():
                    acc = acc + kit.th_pow(a).scale(c)
                if b:
                    acc = acc.truncate(kit.L) * kit.sg_pow(b)
                tot = acc if tot is None else tot + acc
            out[skey] = tot * pref if pref is not None else tot
        return out

    def _step(self, g, n):
        bound = pole_bound(g, n)
        kit = self._kit_for(bound)
        nspec = n - 1
        spec = list(range(nspec))
        mmax = kit.L - 3
        # every kernel has valuation >= -1, so residues only see the bracket below s^top
        top = -min(kit.kernel(m).val for m in range(1, mmax + 1))
        terms = []  # list of {key: LocalSeries}, each already multiplied out
        # term A: omega_{g-1, n+1}(theta, sigma theta, I)
        if g >= 1:
            fA = self._local_factor(kit, (g - 1, n + 1), ["th", "sg"] + spec, nspec)
            terms.append({k: v.truncate(top) for k, v in fA.items()})
        # terms B: ordered splits, omega_{0,1} excluded
        for h in range(g + 1):
            for r in range(nspec + 1):
                for J in combinations(spec, r):
                    Jc = [j for j in spec if j not in J]
                    h2 = g - h
                    if (h, len(J)) == (0, 0) or (h2, len(Jc)) == (0, 0):
                        continue
                    f1 = self._local_factor(kit, (h, 1 + len(J)), ["th"] + list(J), nspec)
                    f2 = self._local_factor(kit, (h2, 1 + len(Jc)), ["sg"] + Jc, nspec)
                    prod = {}
                    for k1, s1 in f1.items():
                        for k2, s2 in f2.items():
                            if s1.val + s2.val >= top:
                                continue
                            k = tuple(x if x is not None else y for x, y in zip(k1, k2))
                            prod[k] = s1.truncate(top - s2.val) * s2.truncate(top - s1.val)
                    terms.append(prod)
        bracket = {}
        for t in terms:
            for k, ser in t.items():
                bracket[k] = bracket[k] + ser if k in bracket else ser
        # residues against the kernel
        res = {}
        for k, B in bracket.items():
            B = B * kit.dtau.truncate(top - B.val)
            row = []
            for m in range(1, mmax + 1):
                Km = kit.kernel(m)
                if Km.val + B.val > -1:
                    break
                try:
                    r = _residue(Km, B)
                except PrecisionError as exc:
                    raise InsufficientLocalOrder(
                        f"local order {kit.L} too small for omega_{g},{n}") from exc
                row.append((m, r))
            if row:
                res[k] = row
        return self._assemble(kit, g, n, res, bound)

    def _assemble(self, kit, g, n, res, bound):
        E1 = 1 + max((m for row in res.values() for m, r in row if r is not None), default=0)
        Es = [0] * (n - 1)
        for k in res:
            for j, item in enumerate(k):
                if item is None:
                    raise AssertionError("spectator missing from a bracket term")
                e = item[1] if item[0] == "q" else item[2]
                Es[j] = max(Es[j], e)
        # state: spectator key -> polynomial in z_1 (list of coefficients)
        state = {}
        for k, row in res.items():
            z1 = []
            for m, r in row:
                if r is None or r.is_exact_zero():
                    continue
                piece = _poly_mul(kit.Qpow(m + 1), kit.Ppow(E1 - m - 1), kit.zero)
                piece = [x * r for x in piece]
                z1 = _poly_add(z1, piece) if z1 else piece
            if z1:
                state[k] = _poly_add(state[k], z1) if k in state else z1
        # spectators paired with omega02 still depend on the root: expand them first,
        # then trace once and finish the root-free spectators over the ground ring
        qcache = {}

        def qfactor(j, item):
            key = (Es[j], item[1])
            if key not in qcache:
                qcache[key] = _poly_mul(kit.Qpow(item[1]), kit.Ppow(Es[j] - item[1]), kit.zero)
            return qcache[key]

        def pfactor(j, item):
            _, e, d = item
            return [None] * e + list(kit.Ppow(Es[j] - d))

        for j in range(n - 1):
            state = _expand_slot(state, j, "q", qfactor)
        state = {k: [trace_sum(c) if not isinstance(c, TS) else c for c in vec] for k, vec in state.items()}
        for j in range(n - 1):
            state = _expand_slot(state, j, "p", pfactor)
        acc = {}
        for k, vec in state.items():
            rest = tuple(item[1] for item in k)
            for i, c in enumerate(vec):
                if c is not None and not _is_exact_zero(c):
                    acc[(i,) + rest] = c
        numer = MPoly(acc, n)
        dens = (E1,) + tuple(Es)
        numer, dens = divide_out_ram(numer, dens, self.P)
        for i, d in enumerate(dens):
            if d > bound:
                raise AssertionError(f"pole order {d} exceeds bound {bound} in omega_{g},{n}")
            if numer.degree_in(i) > d * self.P.degree - 2 and not numer.is_zero():
                raise AssertionError(f"omega_{g},{n} has a pole at infinity in slot {i}")
        numer = MPoly({e: c for e, c in numer.terms.items() if not c.is_zero()}, n)
        return numer, dens


def _expand_slot(state, j, kind, factor):
    """Replace spectator item j of the given kind by its polynomial exponents ("e", i)."""
    out = {}
    for k, vec in state.items():
        item = k[j]
        if item[0] != kind:
            out[k] = _poly_add(out[k], vec) if k in out else vec
            continue
        for i, f in enumerate(factor(j, item)):
            if f is None or _is_exact_zero(f):
                continue
            nk = k[:j] + (("e", i),) + k[j + 1:]
            piece = [c * f for c in vec]
            out[nk] = _poly_add(out[nk], piece) if nk in out else piece
    return out


def _is_exact_zero(x):
    f = getattr(x, "is_exact_zero", None)
    return f() if f else x == 0


# ---- comparisons and symmetry -----------------------------------------------------------


def _cross(md, target_dens):
    P = md.modulus
    out = md.numer
    for i, (d, t) in enumerate(zip(md.dens, target_dens)):
        if t < d:
            raise ValueError("target denominator too small")
        for _ in range(t - d):
            out = out * _var_poly(P, i, md.n)
    return out


def _var_poly(P, i, n):
    terms = {}
    for k, c in enumerate(P.coeffs):
        e = [0] * n
        e[i] = k
        terms[tuple(e)] = c
    return MPoly(terms, n)


def equal(w1: MultiDiff, w2: MultiDiff) -> bool:
    if w1.special or w2.special:
        if w1.special == w2.special == "omega02":
            return True
        if w1.special == w2.special == "omega01":
            d = w1.density - w2.density
            return all(c.is_zero() for c in d.terms.values())
        return False
    if (w1.g, w1.n) != (w2.g, w2.n):
        return False
    if not (w1.modulus == w2.modulus):
        return False
    target = tuple(max(a, b) for a, b in zip(w1.dens, w2.dens))
    diff = _cross(w1, target) - _cross(w2, target)
    if any(c.coeffs for c in diff.terms.values()):
        return False
    if diff.terms and all(c.prec is not None and c.prec <= 0 for c in diff.terms.values()):
        raise TruncationMismatch("no overlapping known coefficients")
    return True


def is_symmetric(w: MultiDiff) -> bool:
    if w.special or w.n < 2:
        return True
    for i in range(w.n - 1):
        perm = list(range(w.n))
        perm[i], perm[i + 1] = perm[i + 1], perm[i]
        if not equal(w, w.permuted(perm)):
            return False
    return True


# ---- expansions at theta = infinity / theta = 0 -----------------------------------------


@dataclass
class SlotExpansion:
    """omega = sum_e terms[e] * theta_slot^e dtheta_slot, complete for lo < e < hi (None: unbounded).

    Each coefficient is an MPoly in the remaining variables, still divided by
    prod_j P(theta_j)^dens[j] (dens lists the remaining slots).
    """

    slot: int
    point: str
    terms: dict
    dens: tuple
    window: tuple

    def coeff(self, e):
        lo, hi = self.window
        if (lo is not None and e <= lo) or (hi is not None and e >= hi):
            raise PrecisionError(f"exponent {e} outside the expansion window {self.window}")
        return self.terms.get(e)


def _series_inv(cs, n):
    inv0 = cs[0].invert(laurent=True)
    out = [inv0]
    for k in range(1, n):
        acc = TruncatedSeries()
        for i in range(1, min(k, len(cs) - 1) + 1):
            acc = acc + cs[i] * out[k - i]
        out.append(-(acc * inv0))
    return out


def _series_pow(cs, d, n):
    out = [TruncatedSeries.constant(1)] + [TruncatedSeries()] * (n - 1)
    for _ in range(d):
        nxt = [TruncatedSeries()] * n
        for i, a in enumerate(out):
            for j in range(n - i):
                if j < len(cs):
                    nxt[i + j] = nxt[i + j] + a * cs[j]
        out = nxt
    return out


def expand_at(md: MultiDiff, slot: int = 0, point: str = "inf", order: int = 4) -> SlotExpansion:
    """Laurent expansion of one slot at theta = infinity or theta = 0, ``order`` terms deep."""
    if point not in ("inf", "0"):
        raise ValueError("point must be 'inf' or '0'")
    if md.special == "omega01":
        raise PoleAtExpansionPoint("omega01 has poles at both theta = 0 and theta = infinity")
    if md.special == "omega02":
        if point == "0":
            raise PoleAtExpansionPoint("expand omega02 at infinity; at 0 the diagonal pole moves with the spectator")
        terms = {-k - 1: MPoly({(k - 1,): TruncatedSeries.constant(k)}, 1) for k in range(1, order + 1)}
        return SlotExpansion(slot, point, terms, (0,), (-order - 2, None))
    P = md.modulus
    p = P.degree
    d = md.dens[slot]
    parts = md.numer.as_univariate(slot)
    rest = tuple(x for i, x in enumerate(md.dens) if i != slot)
    terms = {}
    if point == "inf":
        # P^-d = theta^(-p d) * S(1/theta)
        rev = [P.coeff(p - i) for i in range(p + 1)]
        S = _series_pow(_series_inv(rev, order), d, order)
        top = len(parts) - 1
        for a, Na in enumerate(parts):
            for j, s in enumerate(S):
                e = a - p * d - j
                if e <= top - p * d - order:
                    continue
                terms[e] = terms[e] + Na * s if e in terms else Na * s
        window = (top - p * d - order, None)
    else:
        if P.coeff(0).is_zero():
            raise PoleAtExpansionPoint("a ramification point sits at theta = 0")
        S = _series_pow(_series_inv(list(P.coeffs), order), d, order)
        for a, Na in enumerate(parts):
            for j, s in enumerate(S):
                e = a + j
                if e >= order:
                    continue
                terms[e] = terms[e] + Na * s if e in terms else Na * s
        window = (None, order)
    terms = {e: t for e, t in terms.items() if not t.is_exact_zero()}
    return SlotExpansion(slot, point, terms, rest, window)

"""One-cut disc data, the ordinary curve, its x-y exchanged partner, and deck maps.

Coordinates.  The ordinary curve lives in ``theta`` with
``x = a + c (theta + 1/theta)``.  The exchanged curve is handled in the
rescaled coordinate ``phi = theta / c`` where its ramification points are
units of the coefficient ring; then ``x = a + S phi + 1/phi`` with ``S = c^2``
and ``y = sum_k ytil_k phi^-k``.

Each curve also carries the data actually fed to the recursion: a cover and
cofunction rescaled so that the kernel only ever divides by units, plus the
power of beta (``omega_shift``) that restores the true omega_{0,1}.  Since
omega_{g,n} scales like omega_{0,1}^(2-2g-n), restoring the true forms is an
exact shift.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import comb


from .errors import (
    ConfigError,
    DegenerateRamification,
    NoConvergence,
    NotInvertible,
    ParameterCollision,
)
from .exactring import EXACT, LocalSeries, Poly, QuotRing, TruncatedSeries, as_rational

TS = TruncatedSeries


@dataclass(frozen=True)
class Potential:
    """V(u) = u^2/2 - sum_j t_j u^j / j, with couplings for j >= 3."""

    t: tuple = ()  # sorted (j, t_j) pairs with t_j != 0

    @classmethod
    def from_couplings(cls, couplings):
        items = []
        for j, v in dict(couplings).items():
            j = int(j)
            if j < 3:
                raise ConfigError(f"coupling t{j} not allowed: internal faces have degree >= 3")
            q = as_rational(v)
            if q:
                items.append((j, q))
        return cls(tuple(sorted(items)))

    @property
    def couplings(self):
        return dict(self.t)

    @property
    def r(self):
        """Effective degree of V': largest j with t_j != 0, minus one (1 if V is Gaussian)."""
        return max((j for j, _ in self.t), default=2) - 1

    def is_even(self):
        return all(j % 2 == 0 for j, _ in self.t)

    def single_coupling(self):
        """(j, t_j) if exactly one coupling is nonzero, else None."""
        return self.t[0] if len(self.t) == 1 else None

    def to_json(self):
        from .exactring import fmt_rational

        return {f"t{j}": fmt_rational(q) for j, q in self.t}


class LaurentPoly:
    """Finite Laurent polynomial {exponent: coefficient}."""

    __slots__ = ("terms",)

    def __init__(self, terms):
        self.terms = {k: v for k, v in terms.items() if not _exact_zero(v)}

    @classmethod
    def const(cls, c):
        return cls({0: c})

    def __add__(self, other):
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly.const(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out[k] + v if k in out else v
        return LaurentPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, LaurentPoly):
            return LaurentPoly({k: v * other for k, v in self.terms.items()})
        out = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                p = v1 * v2
                k = k1 + k2
                out[k] = out[k] + p if k in out else p
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n):
        out = LaurentPoly.const(TS.constant(1))
        for _ in range(n):
            out = out * self
        return out

    def coeff(self, k):
        return self.terms.get(k, TS())

    def derivative(self):
        return LaurentPoly({k - 1: v * k for k, v in self.terms.items() if k})

    def min_exp(self):
        return min(self.terms, default=0)

    def max_exp(self):
        return max(self.terms, default=0)

    def part(self, lo, hi):
        return LaurentPoly({k: v for k, v in self.terms.items() if lo <= k <= hi})

    def numerator(self):
        """(N, m) with self = N(T) / T^m, N a polynomial and m >= 0."""
        m = max(0, -self.min_exp())
        deg = self.max_exp() + m
        return Poly([self.coeff(k - m) for k in range(deg + 1)], "T"), m

    def to_json(self):
        return {str(k): v.to_dict() for k, v in sorted(self.terms.items())}


def _exact_zero(v):
    if isinstance(v, TS):
        return v.is_exact_zero()
    return v == 0


# ---- disc data ---------------------------------------------------------------


@dataclass
class DiscData:
    a: TS
    S: TS  # c^2
    c: TS
    chat: TS  # c / beta, a unit
    order: int


def _vprime_parts(V, a, S):
    """theta^0 coefficient of V'(x) and G with [theta^-1] V'(x) = c G."""
    e0 = a
    G = TS.constant(1)
    for j, tj in V.t:
        m = j - 1
        for k in range(m + 1):
            coef = comb(m, k)
            if k % 2 == 0:
                term = a ** (m - k) * S ** (k // 2)
                e0 = e0 - term * (tj * coef * comb(k, k // 2))
            else:
                term = a ** (m - k) * S ** ((k - 1) // 2)
                G = G - term * (tj * coef * comb(k, (k - 1) // 2))
    return e0, G


def solve_disc_data(V: Potential, D: int, max_iter: int | None = None) -> DiscData:
    """Solve the two one-cut conditions for (a, c) in Q[[beta]] modulo beta^D."""
    if D < 2:
        raise ConfigError("truncation order must be at least 2")
    beta2 = TS.monomial(1, 2)
    a = TS.zero(D)
    S = beta2.truncate(D)
    if not V.t:
        a, S = TS.zero(D), beta2.truncate(D)
    else:
        # each sweep fixes at least one more power of beta^2
        limit = max_iter if max_iter is not None else D + 4
        for _ in range(limit):
            e0, G = _vprime_parts(V, a, S)
            a_new = (a - e0).truncate(D)
            S_new = (beta2 * G.invert()).truncate(D)
            if a_new.identical(a) and S_new.identical(S):
                break
            a, S = a_new, S_new
        else:
            raise NoConvergence(f"disc data did not stabilise in {limit} sweeps")
    chat = S.shift(-2).sqrt()
    c = chat.shift(1)
    return DiscData(a=a, S=S, c=c, chat=chat, order=D)


def disc_residuals(V: Potential, disc: DiscData):
    """Return ([theta^0] V'(x), [theta^-1] V'(x) * c - beta^2), both should vanish."""
    e0, G = _vprime_parts(V, disc.a, disc.S)
    return e0, disc.S * G - TS.monomial(1, 2)


# ---- curves -------------------------------------------------------------------


@dataclass
class SpectralCurve:
    role: str  # "ordinary" or "exchanged"
    potential: Potential
    disc: DiscData
    coord: str  # "theta" or "phi" (= theta / c)
    cover: LaurentPoly
    cofunction: LaurentPoly
    ram_poly: Poly
    tr_cover: LaurentPoly
    tr_cofunction: LaurentPoly
    omega_shift: int
    _ring: QuotRing | None = field(default=None, repr=False)

    @property
    def a(self):
        return self.disc.a

    @property
    def c(self):
        return self.disc.c

    @property
    def order(self):
        return self.disc.order

    def ring(self):
        if self._ring is None:
            try:
                self._ring = QuotRing(Poly(self.ram_poly.coeffs, "u"))
            except NotInvertible as exc:
                raise DegenerateRamification("ramification polynomial is not squarefree") from exc
        return self._ring

    def ram_poly_theta(self):
        """Ramification polynomial in the theta coordinate (monic)."""
        if self.coord == "theta":
            return self.ram_poly
        d = self.ram_poly.degree
        c = self.disc.c
        # P(theta / c) * c^d, monic in theta
        return Poly([self.ram_poly.coeff(i) * c ** (d - i) for i in range(d + 1)], "theta")

    def to_json(self):
        return {
            "role": self.role,
            "coordinate": self.coord,
            "a": self.disc.a.to_dict(),
            "c": self.disc.c.to_dict(),
            "order": self.disc.order,
            "cover": self.cover.to_json(),
            "cofunction": self.cofunction.to_json(),
            "ram_poly": [x.to_dict() for x in self.ram_poly.coeffs],
        }


def _x_in_phi(disc):
    return LaurentPoly({0: disc.a, 1: disc.S, -1: TS.constant(1)})


def ytilde(V: Potential, disc: DiscData):
    """Coefficients ytil_k = [phi^-k] V'(a + S phi + 1/phi) for k = 0..r."""
    x = _x_in_phi(disc)
    vp = x
    xp = LaurentPoly.const(TS.constant(1))
    powers = {}
    for j in range(1, V.r + 1):
        xp = xp * x
        powers[j] = xp
    for j, tj in V.t:
        vp = vp - powers[j - 1] * tj
    return [vp.coeff(-k).truncate(disc.order) for k in range(V.r + 1)]


def build_ordinary(V: Potential, disc: DiscData) -> SpectralCurve:
    yt = ytilde(V, disc)
    if not yt[0].is_zero():
        raise NoConvergence("theta^0 coefficient of V'(x) does not vanish")
    c, chat = disc.c, disc.chat
    cover = LaurentPoly({0: disc.a, 1: c, -1: c})
    cof = {}
    trcof = {}
    for k in range(1, V.r + 1):
        cof[-k] = yt[k] * c ** k
        # c * y_k / beta^2 = ytil_k * chat^(k+1) * beta^(k-1)
        trcof[-k] = (yt[k] * chat ** (k + 1)).shift(k - 1)
    one = TS.constant(1)
    return SpectralCurve(
        role="ordinary",
        potential=V,
        disc=disc,
        coord="theta",
        cover=cover,
        cofunction=LaurentPoly(cof),
        ram_poly=Poly([-one, TS(), one], "theta"),
        tr_cover=LaurentPoly({1: one, -1: one}),
        tr_cofunction=LaurentPoly(trcof),
        omega_shift=2,
    )


def build_exchanged(V: Potential, disc: DiscData) -> SpectralCurve:
    if not V.t:
        raise DegenerateRamification(
            "Gaussian potential: y = c/theta has no ramification points; the exchanged curve needs generic couplings"
        )
    r = V.r
    yt = ytilde(V, disc)
    cover = LaurentPoly({-k: yt[k] for k in range(1, r + 1)})
    # -phi^(r+1) dy/dphi = sum_k k ytil_k phi^(r-k)
    coeffs = [yt[r - i] * (r - i) for i in range(r)]
    lead = coeffs[-1]
    if lead.is_zero() or lead.valuation != 0:
        raise DegenerateRamification("leading coefficient of the ramification polynomial is not a unit")
    if r - 1 < 1:
        raise DegenerateRamification("exchanged curve has no ramification points")
    inv = lead.invert()
    P = Poly([x * inv for x in coeffs[:-1]] + [TS.constant(1)], "phi")
    if P.coeff(0).is_zero():
        raise ParameterCollision("a ramification point sits at phi = 0")
    if P.coeff(0).valuation != 0:
        raise ParameterCollision("a ramification point collides with phi = 0 at leading order")
    cof = _x_in_phi(disc)
    curve = SpectralCurve(
        role="exchanged",
        potential=V,
        disc=disc,
        coord="phi",
        cover=cover,
        cofunction=cof,
        ram_poly=P,
        tr_cover=cover,
        tr_cofunction=cof,
        omega_shift=0,
    )
    curve.ring()
    return curve


def build_curves(V: Potential, disc: DiscData):
    return build_ordinary(V, disc), build_exchanged(V, disc)


# ---- local data at the ramification points --------------------------------------


@dataclass
class RamData:
    ring: QuotRing
    order: int  # local series known modulo s^order
    u: object  # the root symbol as a QuotElem
    deck: LocalSeries  # tau(s) with sigma(u + s) = u + tau(s)
    cover_taylor: LocalSeries
    cofn_taylor: LocalSeries
    theta: LocalSeries  # u + s
    theta_inv: LocalSeries  # 1 / (u + s)
    sigma: LocalSeries  # u + tau
    sigma_inv: LocalSeries  # 1 / (u + tau)


def _lseries(ring, coeffs, val=0, prec=EXACT):
    return LocalSeries(coeffs, val, prec, ring.zero())


def eval_laurent(lp: LaurentPoly, pos: LocalSeries, inv: LocalSeries):
    """Evaluate a Laurent polynomial at a local argument given it and its inverse."""
    acc = None
    cache = {}

    def pw(k):
        if k not in cache:
            if k == 0:
                cache[k] = None
            elif k > 0:
                cache[k] = pos if k == 1 else pw(k - 1) * pos
            else:
                cache[k] = inv if k == -1 else pw(k + 1) * inv
        return cache[k]

    for k, v in sorted(lp.terms.items()):
        term = pw(k)
        if term is None:
            term = LocalSeries([pos.zero + v], 0, EXACT, pos.zero, pos.point)
        else:
            term = term.scale(v)
        acc = term if acc is None else acc + term
    if acc is None:
        return LocalSeries([], 0, EXACT, pos.zero, pos.point)
    return acc


def deck_expansion(curve: SpectralCurve, m: int) -> RamData:
    """Local involution sigma(u + s) = u + tau(s) at all ramification points at once.

    With cover = N(T)/T^k, the polynomial N(T) Th^k - N(Th) T^k vanishes at
    T = Th = u + s; dividing out (T - Th) leaves q(T) whose root near u - s is
    the conjugate point, found by Newton iteration in s.
    """
    R = curve.ring()
    u = R.gen()
    zero = R.zero()
    one = R.one()
    X = curve.tr_cover
    N, k = X.numerator()
    theta = LocalSeries([u, one], 0, EXACT, zero)
    th_pows = [LocalSeries([one], 0, EXACT, zero)]
    for _ in range(max(N.degree, k) + 1):
        th_pows.append(th_pows[-1] * theta)
    N_th = LocalSeries([], 0, EXACT, zero)
    for i, ci in enumerate(N.coeffs):
        N_th = N_th + th_pows[i].scale(ci)
    # p(T) = N(T) Th^k - N(Th) T^k, coefficients are polynomials in s
    deg = max(N.degree, k)
    p = []
    for i in range(deg + 1):
        term = th_pows[k].scale(N.coeff(i)) if i <= N.degree else LocalSeries([], 0, EXACT, zero)
        if i == k:
            term = term - N_th
        p.append(term)
    # synthetic division by (T - Th)
    q = [None] * deg
    q[deg - 1] = p[deg]
    for i in range(deg - 1, 0, -1):
        q[i - 1] = p[i] + theta * q[i]
    rem = p[0] + theta * q[0]
    if not all(c.is_zero() for c in rem.coeffs):
        raise ArithmeticError("synthetic division left a remainder")
    dq = [q[i] * i for i in range(1, deg)]

    def horner(cs, T):
        acc = cs[-1]
        for c in reversed(cs[:-1]):
            acc = acc * T + c
        return acc

    tau = LocalSeries([-one], 1, EXACT, zero)
    cur = 2
    while cur < m + 1:
        cur = min(2 * cur, m + 1)
        T = (tau + u).truncate(cur)
        f = horner([c.truncate(cur) for c in q], T)
        fp = horner([c.truncate(cur) for c in dq], T) if dq else None
        tau = (tau - f * fp.truncate(cur).inverse()).truncate(cur)
        tau = LocalSeries(tau.coeffs, tau.val, EXACT, zero)
    tau = tau.truncate(m + 1)
    if tau.val < 1:
        tau = tau.drop_leading(1 - tau.val)
    # check q(u + tau) vanishes to the requested order
    T = tau + u
    resid = horner(q, T)
    if not all(c.is_zero() for c in resid.coeffs):
        raise ArithmeticError("deck map residual does not vanish")
    sigma = tau + u
    try:
        theta_inv = theta.truncate(m + 1).inverse()
        sigma_inv = sigma.inverse()
    except NotInvertible as exc:
        raise ParameterCollision("a ramification point sits at the origin") from exc
    cover_t = eval_laurent(X, theta.truncate(m + 1), theta_inv)
    cofn_t = eval_laurent(curve.tr_cofunction, theta.truncate(m + 1), theta_inv)
    return RamData(
        ring=R,
        order=m + 1,
        u=u,
        deck=tau,
        cover_taylor=cover_t,
        cofn_taylor=cofn_t,
        theta=theta.truncate(m + 1),
        theta_inv=theta_inv,
        sigma=sigma,
        sigma_inv=sigma_inv,
    )

"""The identity suite behind ``fsmaps verify``: one CheckResult per property or relation."""
from __future__ import annotations

import time
from dataclasses import dataclass, field

from gmpy2 import mpq

from . import census
from .config import RunConfig
from .counts import euler_vertices
from .curve import build_curves, disc_residuals, solve_disc_data
from .errors import FsmapsError
from .extract import (
    check_disc_inversion,
    check_cylinder_relation,
    check_pants_relation,
    closed_form_vs_table,
    compare_with_oracle,
    extract_fsmap_counts,
    extract_map_counts,
    free_energy,
    free_energy_via_ydx,
    loop_equation_holds,
    map_combination,
    residues_vanish,
    rest_coefficients,
    rest_combination,
    xy_residue_sum,
)
from .exactring import TruncatedSeries
from .tr import TREngine, is_symmetric, pole_bound

TS = TruncatedSeries


@dataclass
class CheckResult:
    name: str
    ok: bool
    detail: dict = field(default_factory=dict)

    def to_json(self):
        return {"name": self.name, "ok": self.ok, "detail": self.detail}


@dataclass
class VerificationReport:
    config: RunConfig
    checks: list
    seconds: float = 0.0

    @property
    def ok(self):
        return all(c.ok for c in self.checks)

    def failures(self):
        return [c for c in self.checks if not c.ok]

    def to_json(self):
        return {
            "config": self.config.to_json(),
            "all_ok": self.ok,
            "checks": [c.to_json() for c in self.checks],
            "metadata": {"seconds": round(self.seconds, 3), "finished": time.strftime("%Y-%m-%dT%H:%M:%S")},
        }


def topologies(chi):
    """(g, n) with n >= 1 and 1 <= 2g - 2 + n <= chi."""
    out = []
    for g in range(0, chi // 2 + 2):
        for n in range(1, chi + 3):
            if 1 <= 2 * g - 2 + n <= chi:
                out.append((g, n))
    return sorted(out, key=lambda gn: (2 * gn[0] - 2 + gn[1], gn))


def _series_json(s: TS):
    return {"value": str(s), "precision": s.prec}


class Suite:
    def __init__(self, cfg: RunConfig, with_census=True):
        self.cfg = cfg
        self.with_census = with_census
        self.V = cfg.potential
        self.disc = solve_disc_data(self.V, cfg.order)
        self.ordinary, self.exchanged = build_curves(self.V, self.disc)
        self.eo = TREngine(self.ordinary)
        self.ex = TREngine(self.exchanged)
        self.checks = []

    def record(self, name, ok, **detail):
        self.checks.append(CheckResult(name, bool(ok), detail))

    def record_relation(self, r):
        d = r.to_json()
        self.record(d.pop("name"), d.pop("ok"), **d)

    def guarded(self, name, fn):
        try:
            fn()
        except (FsmapsError, ArithmeticError, ValueError) as exc:
            self.record(name, False, error=f"{type(exc).__name__}: {exc}")

    # ---- individual groups --------------------------------------------------------
    def disc_conditions(self):
        e0, e1 = disc_residuals(self.V, self.disc)
        self.record("disc conditions", e0.is_zero() and e1.is_zero(), residuals=[str(e0), str(e1)])

    def multidifferentials(self):
        for g, n in topologies(self.cfg.chi):
            for eng in (self.eo, self.ex):
                role = eng.curve.role
                tag = f"omega[{g},{n}] {role}"

                def run(eng=eng, g=g, n=n, tag=tag):
                    md = eng.omega(g, n)
                    self.record(f"{tag} symmetric", is_symmetric(md))
                    bound = pole_bound(g, n)
                    self.record(f"{tag} pole orders", all(d <= bound for d in md.dens),
                                dens=list(md.dens), bound=bound)
                    if n == 1:
                        self.record(f"{tag} zero residues", residues_vanish(eng.curve, md))
                        if role == "ordinary":
                            self.record(f"{tag} loop equation", loop_equation_holds(md))
                        elif g >= 2:
                            s = xy_residue_sum(eng.curve, md)
                            self.record(f"{tag} sum Res x y omega = 0", s.is_zero(), **_series_json(s))

                self.guarded(tag, run)

    def relations(self):
        K = self.cfg.degree_cap
        o, x = self.ordinary, self.exchanged

        def disc_inversion():
            for r in check_disc_inversion(o, x, K):
                self.record_relation(r)

        def cylinder():
            r = check_cylinder_relation(o, x, min(K, 6))
            self.record_relation(r)

        def pants():
            r = check_pants_relation(o, x, self.eo.omega(0, 3), self.ex.omega(0, 3))
            self.record_relation(r)

        self.guarded("disc inversion", disc_inversion)
        self.guarded("cylinder relation", cylinder)
        self.guarded("pants relation", pants)

    def free_energies(self, g=2):
        o, x = self.ordinary, self.exchanged

        def run():
            w = self.eo.omega(g, 1)
            wx = self.ex.omega(g, 1)
            F = free_energy(o, g, w).value
            Fx = free_energy(x, g, wx).value
            comb = map_combination(o, g, self.eo)
            rest = rest_coefficients(x, wx, self.V.r + 1)
            rcomb = rest_combination(x, rest)
            if self.cfg.chi < 3:
                s = xy_residue_sum(x, wx)
                self.record(f"omega[{g},1] exchanged sum Res x y omega = 0", s.is_zero(), **_series_json(s))
            shifted = free_energy(o, g, w, basepoint=TS.constant(mpq(7, 3))).value
            self.record(f"F{g} basepoint independence", (F - shifted).is_zero())
            self.record(f"F{g} exchanged: x dy form = -y dx form", (Fx - free_energy_via_ydx(x, g, wx)).is_zero())
            self.record(f"F{g} ordinary: residue form = Map combination", (F - comb).is_zero(),
                        residue_form=str(F), map_combination=str(comb))
            self.record(f"F{g} exchanged: residue form = Rest combination", (Fx - rcomb).is_zero(),
                        residue_form=str(Fx), rest_combination=str(rcomb))
            self.record(f"F{g}: Map combination = Rest combination", (comb - rcomb).is_zero())
            if self.with_census:
                self._closed_maps(g, comb, F)

        self.guarded(f"F{g}", run)

    def _closed_maps(self, g, comb, F):
        """Map combination = alpha d/dalpha Map_{g,empty}, residue form = (2-2g) Map_{g,empty} + const."""
        coupling = self.V.single_coupling()
        if coupling is None:
            return
        j, tj = coupling
        rows = []
        ok_comb = ok_res = True
        for prof in census.profiles_for((), (j,), self.cfg.edge_cap, self.cfg.edge_cap):
            if not prof:
                continue
            V = euler_vertices(g, (), prof)
            if V is None or V < 1:
                continue
            e = 2 * (V - 2 + 2 * g)
            if comb.prec is not None and e >= min(comb.prec, F.prec or e + 1):
                continue
            f = prof[0][1]
            N = census.count_profile(g, (), dict(prof), kind="ordinary", cap=self.cfg.edge_cap)["ordinary"]
            weight = tj ** f
            c_val, f_val = comb.coeff(e), F.coeff(e)
            ok_comb &= c_val == (2 - 2 * g - V) * N * weight
            ok_res &= f_val == (2 - 2 * g) * N * weight
            rows.append({"V": V, "faces": f, "census": str(N), "map_combination": str(c_val),
                         "residue_form": str(f_val)})
        if not rows:
            return  # no closed map fits under the edge cap
        self.record(f"F{g}: Map combination = alpha d/dalpha (closed census)", ok_comb, rows=rows)
        self.record(f"F{g}: residue form = (2-2g) (closed census)", ok_res, rows=rows)

    def oracle(self):
        cap = self.cfg.edge_cap
        K = self.cfg.degree_cap
        for g, n in ((0, 1), (0, 2), (1, 1)):
            for ks in _boundaries(n, K, cap):
                for kind in ("ordinary", "fully_simple"):
                    name = f"TR = census {kind} g={g} k={ks}"

                    def run(g=g, ks=ks, kind=kind, name=name):
                        if kind == "ordinary":
                            tab = extract_map_counts(self.ordinary, g, ks, self.eo)
                            cmp = compare_with_oracle(tab, self.ordinary, cap)
                        else:
                            tab = extract_fsmap_counts(self.exchanged, g, ks, self.ex)
                            cmp = compare_with_oracle(tab, self.exchanged, cap)
                        bad = [(V, list(p), str(a), str(b)) for V, p, a, b in cmp.mismatches]
                        self.record(name, cmp.ok and not cmp.unresolved, compared=len(cmp.compared),
                                    unresolved=[list(p) for p in cmp.unresolved], mismatches=bad)

                    self.guarded(name, run)

    def closed_forms(self):
        if self.V.t != ((4, mpq(1)),):
            return
        for kind, ms in (("ordinary", (0, 1, 2)), ("fully_simple", (1, 2))):
            for m in ms:
                name = f"genus-one closed form {kind} m={m}"

                def run(kind=kind, m=m, name=name):
                    if kind == "ordinary":
                        tab = extract_map_counts(self.ordinary, 1, (2 * m + 2,), self.eo)
                    else:
                        tab = extract_fsmap_counts(self.exchanged, 1, (2 * m,), self.ex)
                    rows = closed_form_vs_table(tab, kind, m)
                    nontrivial = sum(1 for _, a, _ in rows if a)
                    ok = all(a == b for _, a, b in rows) and nontrivial >= 3
                    self.record(name, ok, nontrivial=nontrivial,
                                rows=[[f, str(a), str(b)] for f, a, b in rows])

                self.guarded(name, run)


def _boundaries(n, K, cap):
    if n == 1:
        return [(k,) for k in range(1, K + 1) if k <= cap]
    return [(a, b) for a in range(1, K + 1) for b in range(a, K + 1) if a + b <= cap]


def run_verification(cfg: RunConfig, with_census=True) -> VerificationReport:
    t0 = time.perf_counter()
    s = Suite(cfg, with_census)
    s.disc_conditions()
    s.multidifferentials()
    s.relations()
    if cfg.chi >= 2:
        s.free_energies(2)
    if with_census:
        s.oracle()
    s.closed_forms()
    return VerificationReport(cfg, s.checks, time.perf_counter() - t0)

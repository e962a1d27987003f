"""Count tables graded by vertex number and internal-face profile."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

from gmpy2 import mpq

from .exactring import fmt_rational


def profile_key(faces):
    """Canonical profile: sorted ((degree, multiplicity), ...) without zeros.

    ``None`` stands for an unresolved profile (several couplings share one vertex count).
    """
    if faces is None:
        return None
    if isinstance(faces, dict):
        items = faces.items()
    else:
        items = faces
    return tuple(sorted((int(j), int(f)) for j, f in items if f))


def euler_vertices(g, ks, profile):
    """V from Euler's relation, or None when it is not an integer."""
    twice = 2 * (2 - 2 * g - len(ks)) + sum(ks) + sum((j - 2) * f for j, f in profile)
    if twice % 2:
        return None
    return twice // 2


@dataclass
class CountTable:
    kind: str  # "ordinary" | "fully_simple" | "closed"
    g: int
    ks: tuple
    entries: dict = field(default_factory=dict)  # (V, profile) -> mpq
    provenance: str = "tr"
    v_limit: int | None = None  # entries with V < v_limit are complete; None = no bound

    def add(self, V, profile, value):
        key = (V, profile_key(profile))
        self.entries[key] = self.entries.get(key, mpq(0)) + mpq(value)

    def get(self, profile, default=0):
        prof = profile_key(profile)
        for (V, p), v in self.entries.items():
            if p == prof:
                return v
        return mpq(default)

    def nonzero(self):
        return {k: v for k, v in self.entries.items() if v}

    def same_counts(self, other, profiles=None):
        """Compare nonzero entries, optionally only on the given profiles."""
        a, b = self.nonzero(), other.nonzero()
        if profiles is not None:
            keep = {profile_key(p) for p in profiles}
            a = {k: v for k, v in a.items() if k[1] in keep}
            b = {k: v for k, v in b.items() if k[1] in keep}
        return a == b

    def rows(self):
        out = []
        for (V, prof), v in sorted(self.entries.items(), key=lambda kv: (kv[0][0], kv[0][1] or ())):
            out.append({
                "g": self.g,
                "k": " ".join(map(str, self.ks)),
                "faces": "?" if prof is None else " ".join(f"{j}:{f}" for j, f in prof),
                "V": V,
                "count": fmt_rational(v),
            })
        return out

    def to_csv(self):
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=["g", "k", "faces", "V", "count"], lineterminator="\n")
        w.writeheader()
        for r in self.rows():
            w.writerow(r)
        return buf.getvalue()

    def to_json(self):
        return {
            "kind": self.kind,
            "g": self.g,
            "k": list(self.ks),
            "provenance": self.provenance,
            "v_limit": self.v_limit,
            "entries": self.rows(),
        }

"""Brute-force enumeration of maps as permutation triples.

Oriented edges are 0..ne-1.  sigma2 rotates around faces, sigma1 is the
edge involution, sigma0 rotates around vertices, with sigma0 sigma1 sigma2 = id
(composition right to left), i.e. sigma0 = sigma2^-1 o sigma1.

Counting.  sigma2 is fixed in a canonical form: boundary faces first, each a
consecutive block whose first element is the root, then internal faces.
Every fixed-point-free involution sigma1 giving a connected map is a labelled
map.  Relabellings that fix sigma2 and the roots form the centralizer of the
internal part of sigma2; they act freely, so classes = labelled / |centralizer|.
For closed maps the full centralizer is used, which gives sum 1/|Aut|.
The search skips relabelling-equivalent branches by touching untouched
internal faces only through one representative and carrying the multiplicity.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from math import factorial

from gmpy2 import mpq

from .counts import CountTable, euler_vertices, profile_key
from .errors import CapExceeded, ConfigError, FsmapsError

DEFAULT_EDGE_CAP = 16


class InvalidTriple(FsmapsError):
    """A permutation triple breaks one of the map axioms; ``kind`` says which."""

    def __init__(self, kind, msg=""):
        super().__init__(f"{kind}: {msg}" if msg else kind)
        self.kind = kind


@dataclass(frozen=True)
class PermTriple:
    ne: int
    s0: tuple
    s1: tuple
    s2: tuple
    roots: tuple = ()


@dataclass(frozen=True)
class Validation:
    genus: int
    vertex_degrees: tuple
    face_degrees: tuple


def cycles(perm):
    seen = [False] * len(perm)
    out = []
    for i in range(len(perm)):
        if not seen[i]:
            c = []
            j = i
            while not seen[j]:
                seen[j] = True
                c.append(j)
                j = perm[j]
            out.append(tuple(c))
    return out


def inverse(perm):
    inv = [0] * len(perm)
    for i, p in enumerate(perm):
        inv[p] = i
    return tuple(inv)


def compose(*perms):
    """compose(a, b, c)(x) = a(b(c(x)))."""
    n = len(perms[0])
    out = list(range(n))
    for p in reversed(perms):
        out = [p[x] for x in out]
    return tuple(out)


def _is_perm(p, n):
    return len(p) == n and sorted(p) == list(range(n))


def _connected(ne, gens):
    parent = list(range(ne))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for p in gens:
        for i, j in enumerate(p):
            a, b = find(i), find(j)
            if a != b:
                parent[a] = b
    return len({find(i) for i in range(ne)}) <= 1


def validate(tp: PermTriple) -> Validation:
    ne = tp.ne
    if ne % 2:
        raise InvalidTriple("OddEdgeCount", f"ne = {ne}")
    for name, p in (("s0", tp.s0), ("s1", tp.s1), ("s2", tp.s2)):
        if not _is_perm(p, ne):
            raise InvalidTriple("NotAPermutation", name)
    for i in range(ne):
        if tp.s1[i] == i:
            raise InvalidTriple("FixedPointInInvolution", f"sigma1 fixes {i}")
        if tp.s1[tp.s1[i]] != i:
            raise InvalidTriple("NotAnInvolution", f"sigma1 at {i}")
    if compose(tp.s0, tp.s1, tp.s2) != tuple(range(ne)):
        raise InvalidTriple("CompositionNotIdentity")
    if ne and not _connected(ne, (tp.s1, tp.s2)):
        raise InvalidTriple("Disconnected")
    f2 = cycles(tp.s2)
    owner = {}
    for ci, c in enumerate(f2):
        for x in c:
            owner[x] = ci
    faces_hit = [owner[r] for r in tp.roots]
    if len(set(faces_hit)) != len(faces_hit):
        raise InvalidTriple("RootsShareFace")
    v = cycles(tp.s0)
    twice = 2 - len(v) + ne // 2 - len(f2)
    if ne == 0:
        twice = 0
    if twice % 2 or twice < 0:
        raise InvalidTriple("NonIntegralGenus", str(twice))
    return Validation(twice // 2, tuple(sorted(len(c) for c in v)), tuple(sorted(len(c) for c in f2)))


def _induced_is_identity(perm, subset, orbit_perm, roots):
    marked = set()
    for r in roots:
        x = r
        while True:
            marked.add(x)
            x = orbit_perm[x]
            if x == r:
                break
    for c in cycles(perm):
        if sum(1 for x in c if x in marked) > 1:
            return False
    return True


def is_fully_simple(tp: PermTriple) -> bool:
    """At most one boundary oriented edge per vertex."""
    if tp.ne == 0:
        return True
    return _induced_is_identity(tp.s0, None, tp.s2, tp.roots)


def dual(tp: PermTriple) -> PermTriple:
    """Exchange vertices and faces.

    Swapping sigma0 and sigma2 literally breaks sigma0 sigma1 sigma2 = id, so
    the inverses are swapped instead; applying the map twice is the identity.
    """
    return PermTriple(tp.ne, inverse(tp.s2), tp.s1, inverse(tp.s0), tp.roots)


def star_unique_check(tp: PermTriple) -> bool:
    """Each face meets at most one element of the marked vertices (sigma0-orbits of the roots)."""
    if tp.ne == 0:
        return True
    return _induced_is_identity(tp.s2, None, tp.s0, tp.roots)


# ---- canonical sigma2 and enumeration -----------------------------------------------------


def canonical_faces(ks, profile):
    """sigma2 with boundary blocks first (roots at block starts) then internal faces."""
    s2 = []
    roots = []
    blocks = []
    pos = 0
    for k in ks:
        blocks.append((pos, k, True))
        roots.append(pos)
        pos += k
    for j, f in profile:
        for _ in range(f):
            blocks.append((pos, j, False))
            pos += j
    s2 = list(range(pos))
    for start, k, _ in blocks:
        for i in range(k):
            s2[start + i] = start + (i + 1) % k
    return tuple(s2), tuple(roots), blocks


def centralizer_order(profile):
    out = 1
    for j, f in profile:
        out *= j ** f * factorial(f)
    return out


@dataclass
class MapFilter:
    g: int
    ks: tuple
    degrees: tuple = (3, 4)
    max_faces: int = 4
    closed: bool = False


class _Search:
    def __init__(self, ks, profile, gmax, fs_only=False):
        self.ks = tuple(ks)
        self.profile = profile_key(profile)
        s2, roots, blocks = canonical_faces(self.ks, self.profile)
        self.s2 = s2
        self.s2inv = inverse(s2)
        self.roots = roots
        self.ne = len(s2)
        self.E = self.ne // 2
        self.F = len(blocks)
        self.gmax = gmax
        self.fs_only = fs_only
        self.boundary = [False] * self.ne
        self.face_of = [0] * self.ne
        for bi, (start, k, is_b) in enumerate(blocks):
            for i in range(k):
                self.face_of[start + i] = bi
                self.boundary[start + i] = is_b
        self.blocks = blocks
        # V >= V_min  <=>  genus <= gmax
        self.vmin = 2 - 2 * gmax - self.F + self.E

    def run(self):
        """{(genus, fully_simple): weighted labelled count}."""
        ne = self.ne
        self.s1 = [-1] * ne
        # open sigma0 chains: start_of[end], end_of[start], boundary count per chain (by start)
        self.succ = [-1] * ne
        self.start_of = list(range(ne))
        self.end_of = list(range(ne))
        self.bcount = [1 if b else 0 for b in self.boundary]
        self.closed = 0
        self.closed_bad = 0
        self.touched = [False] * len(self.blocks)
        for bi, (_, _, is_b) in enumerate(self.blocks):
            self.touched[bi] = is_b
        self.result = {}
        if ne == 0:
            self.result[(0, True)] = 1
            return self.result
        self._rec(ne, 1)
        return self.result

    def _link(self, a, b):
        """Set sigma0(a) = b; returns undo info."""
        sa = self.start_of[a]
        eb = self.end_of[b]
        self.succ[a] = b
        if sa == b:
            self.closed += 1
            bad = self.bcount[b] > 1
            if bad:
                self.closed_bad += 1
            return ("c", a, bad)
        old = (self.end_of[sa], self.start_of[eb], self.bcount[sa])
        self.end_of[sa] = eb
        self.start_of[eb] = sa
        self.bcount[sa] += self.bcount[b]
        return ("m", a, sa, eb, old)

    def _unlink(self, info):
        if info[0] == "c":
            _, a, bad = info
            self.closed -= 1
            if bad:
                self.closed_bad -= 1
            self.succ[a] = -1
            return
        _, a, sa, eb, old = info
        self.end_of[sa], self.start_of[eb], self.bcount[sa] = old
        self.succ[a] = -1

    def _rec(self, unpaired, weight):
        if self.closed + unpaired < self.vmin:
            return
        if self.fs_only and self.closed_bad:
            return
        if unpaired == 0:
            self._leaf(weight)
            return
        s1 = self.s1
        x = s1.index(-1)
        # candidate partners; untouched internal faces only through one representative
        seen_untouched = set()
        for y in range(x + 1, self.ne):
            if s1[y] != -1:
                continue
            fb = self.face_of[y]
            mult = 1
            newly = False
            if not self.touched[fb]:
                start, length, _ = self.blocks[fb]
                if length in seen_untouched:
                    continue
                if y != start:
                    continue
                seen_untouched.add(length)
                same = sum(1 for bj, (st, ln, isb) in enumerate(self.blocks)
                           if not isb and ln == length and not self.touched[bj])
                mult = same * length
                newly = True
            fx = self.face_of[x]
            s1[x], s1[y] = y, x
            if newly:
                self.touched[fb] = True
            tx = self.touched[fx]
            self.touched[fx] = True
            u1 = self._link(x, self.s2inv[y])
            u2 = self._link(y, self.s2inv[x])
            self._rec(unpaired - 2, weight * mult)
            self._unlink(u2)
            self._unlink(u1)
            self.touched[fx] = tx
            if newly:
                self.touched[fb] = False
            s1[x] = s1[y] = -1

    def _leaf(self, weight):
        s1 = tuple(self.s1)
        if not _connected(self.ne, (s1, self.s2)):
            return
        V = self.closed
        twice = 2 - V + self.E - self.F
        g = twice // 2
        fs = self.closed_bad == 0
        key = (g, fs)
        self.result[key] = self.result.get(key, 0) + weight


def count_profile(g, ks, profile, kind="both", cap=DEFAULT_EDGE_CAP):
    """Exact class counts for one face profile: {"ordinary": q, "fully_simple": q}."""
    profile = profile_key(profile)
    ne = sum(ks) + sum(j * f for j, f in profile)
    if ne > cap:
        raise CapExceeded(f"{ne} oriented edges exceeds cap {cap}")
    out = {"ordinary": mpq(0), "fully_simple": mpq(0)}
    if ne % 2:
        return out
    if ks == (0,):
        if profile:
            return out
        # the single vertex map
        val = mpq(1) if g == 0 else mpq(0)
        return {"ordinary": val, "fully_simple": val}
    if any(k == 0 for k in ks):
        return out
    if not ks and not profile:
        return out
    if ks:
        search = _Search(ks, profile, g, fs_only=(kind == "fully_simple"))
    else:
        search = _ClosedSearch(profile, g)
    res = search.run()
    cent = centralizer_order(profile)
    for (gg, fs), w in res.items():
        if gg != g:
            continue
        out["ordinary"] += mpq(w, cent)
        if fs:
            out["fully_simple"] += mpq(w, cent)
    return out


class _ClosedSearch(_Search):
    """Closed maps.

    With no boundary the smallest oriented edge lies on the first internal
    face, so that face is treated as touched from the start and enumerated in
    full.  Dividing by the whole centralizer gives sum 1/|Aut|.
    """

    def __init__(self, profile, gmax):
        super().__init__((), profile, gmax)
        self.cent = centralizer_order(self.profile)

    def run(self):
        ne = self.ne
        self.s1 = [-1] * ne
        self.succ = [-1] * ne
        self.start_of = list(range(ne))
        self.end_of = list(range(ne))
        self.bcount = [0] * ne
        self.closed = 0
        self.closed_bad = 0
        self.touched = [False] * len(self.blocks)
        self.touched[0] = True
        self.result = {}
        self._rec(ne, 1)
        return self.result


def enumerate_maps(flt: MapFilter, cap=DEFAULT_EDGE_CAP):
    """Ordinary and fully simple tables over all profiles allowed by the filter."""
    ks = tuple(flt.ks)
    kind_o = "closed" if not ks else "ordinary"
    ordinary = CountTable(kind_o, flt.g, ks, provenance="oracle")
    fully = CountTable("fully_simple", flt.g, ks, provenance="oracle")
    for prof in profiles_for(ks, flt.degrees, flt.max_faces, cap):
        V = euler_vertices(flt.g, ks, prof)
        if V is None or V < 1:
            continue
        res = count_profile(flt.g, ks, prof, cap=cap)
        ordinary.add(V, prof, res["ordinary"])
        fully.add(V, prof, res["fully_simple"])
    return ordinary, fully


def profiles_for(ks, degrees, max_faces, cap=DEFAULT_EDGE_CAP):
    """Face profiles over the allowed degrees with at most max_faces faces and ne <= cap."""
    degrees = sorted(set(degrees))
    base = sum(ks)
    out = []
    ranges = [range(0, max_faces + 1) for _ in degrees]
    for fs in product(*ranges):
        if sum(fs) > max_faces:
            continue
        ne = base + sum(j * f for j, f in zip(degrees, fs))
        if ne > cap or ne % 2:
            continue
        out.append(profile_key(zip(degrees, fs)))
    return out


def oracle_counts(kind, g, ks, degrees=(3, 4), max_faces=4, cap=DEFAULT_EDGE_CAP, profile=None):
    """Census table for one (kind, g, k); ``profile`` restricts to a single face profile."""
    ks = tuple(ks)
    if kind not in ("ordinary", "fully_simple", "closed"):
        raise ConfigError(f"unknown kind {kind!r}")
    if kind == "closed":
        ks = ()
    table = CountTable(kind, g, ks, provenance="oracle")
    profs = [profile_key(profile)] if profile is not None else profiles_for(ks, degrees, max_faces, cap)
    for prof in profs:
        V = euler_vertices(g, ks, prof)
        if V is None or V < 1:
            continue
        res = count_profile(g, ks, prof, kind=kind, cap=cap)
        val = res["fully_simple" if kind == "fully_simple" else "ordinary"]
        table.add(V, prof, val)
    return table


# ---- independent cross-check: canonical labelling --------------------------------------------


def _canonical_code(s1, s2, roots, ne):
    """Relabel by BFS from the roots; the code is the relabelled (s1, s2)."""
    if roots:
        starts = list(roots)
    else:
        starts = None
    best = None
    cands = [starts] if starts is not None else [[x] for x in range(ne)]
    for st in cands:
        label = {}
        order = []
        queue = []
        for r in st:
            if r not in label:
                label[r] = len(order)
                order.append(r)
                queue.append(r)
        i = 0
        while i < len(queue):
            x = queue[i]
            i += 1
            for y in (s2[x], s1[x]):
                if y not in label:
                    label[y] = len(order)
                    order.append(y)
                    queue.append(y)
        code = tuple((label[s1[x]], label[s2[x]]) for x in order)
        if best is None or code < best:
            best = code
    return best


def _all_matchings(items):
    if not items:
        yield []
        return
    x = items[0]
    for i in range(1, len(items)):
        y = items[i]
        rest = items[1:i] + items[i + 1:]
        for m in _all_matchings(rest):
            yield [(x, y)] + m


def count_profile_by_canonical_form(g, ks, profile):
    """Class counts by explicit isomorphism rejection (rooted case only)."""
    profile = profile_key(profile)
    s2, roots, blocks = canonical_faces(tuple(ks), profile)
    ne = len(s2)
    s2inv = inverse(s2)
    seen_o, seen_f = set(), set()
    for m in _all_matchings(list(range(ne))):
        s1 = [0] * ne
        for x, y in m:
            s1[x], s1[y] = y, x
        s1 = tuple(s1)
        if not _connected(ne, (s1, s2)):
            continue
        s0 = compose(s2inv, s1)
        tp = PermTriple(ne, s0, s1, s2, roots)
        val = validate(tp)
        if val.genus != g:
            continue
        code = _canonical_code(s1, s2, roots, ne)
        seen_o.add(code)
        if is_fully_simple(tp):
            seen_f.add(code)
    return {"ordinary": mpq(len(seen_o)), "fully_simple": mpq(len(seen_f))}


def iter_triples(ks, profile, gmax=None):
    """All labelled connected triples with the canonical sigma2 (for property checks)."""
    profile = profile_key(profile)
    s2, roots, _ = canonical_faces(tuple(ks), profile)
    ne = len(s2)
    s2inv = inverse(s2)
    for m in _all_matchings(list(range(ne))):
        s1 = [0] * ne
        for x, y in m:
            s1[x], s1[y] = y, x
        s1 = tuple(s1)
        if not _connected(ne, (s1, s2)):
            continue
        tp = PermTriple(ne, compose(s2inv, s1), s1, s2, roots)
        if gmax is not None and validate(tp).genus > gmax:
            continue
        yield tp

"""Executable reductions: degree lowering with CRT recovery, planarization,
the a-trail instance, and the sweep-gadget approximation reduction."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .counting import GadgetNetwork, compose_vr, count_closed
from .gadgets import (build_0xy, build_deg4_map_gadget, build_q, build_shuffle_gadget,
                      vertex_factor)
from .graph import ATRAIL, GENERAL, MapBuilder, MapError, MixedMap
from .kotzig import trace_faces

DEFAULT_THRESHOLD = 6  # replace degrees > 4
TEST_THRESHOLD = 4   # replace degrees >= 4 too


# ---------------------------------------------------------------------------
# primes and CRT
# ---------------------------------------------------------------------------

def _primes_upto(n: int) -> List[int]:
    sieve = bytearray([1]) * (n + 1)
    sieve[:2] = b"\x00\x00"
    for i in range(2, int(n ** 0.5) + 1):
        if sieve[i]:
            sieve[i * i::i] = bytearray(len(sieve[i * i::i]))
    return [i for i in range(n + 1) if sieve[i]]


def select_primes(count: int, lower: int, product_bound: int) -> List[int]:
    """Smallest primes above ``lower`` whose product exceeds ``product_bound``.

    ``count`` caps how many primes may be used.
    """
    if count < 1 or product_bound < 1 or lower < 0:
        raise MapError("count and product_bound must be positive")
    out: List[int] = []
    prod = 1
    limit = max(64, 2 * lower + 16)
    while True:
        for p in _primes_upto(limit):
            if p <= lower or (out and p <= out[-1]):
                continue
            out.append(p)
            prod *= p
            if prod > product_bound:
                return out
            if len(out) >= count:
                raise MapError(f"{count} primes above {lower} cannot exceed {product_bound}")
        limit *= 2


@dataclass
class DegreeProfile:
    counts: Dict[int, int] = field(default_factory=dict)

    def __post_init__(self):
        for d, n in self.counts.items():
            if d % 2 or d < 0 or n < 0:
                raise MapError(f"bad degree profile entry {d}: {n}")
        self.counts = {d: n for d, n in sorted(self.counts.items()) if n}

    @classmethod
    def of(cls, m: MixedMap, threshold: int = 0) -> "DegreeProfile":
        prof: Dict[int, int] = {}
        for d in m.degrees().values():
            if d >= threshold:
                prof[d] = prof.get(d, 0) + 1
        return cls(prof)

    def n_edges(self) -> int:
        return sum(d * n for d, n in self.counts.items()) // 2

    def factor(self) -> int:
        out = 1
        for d, n in self.counts.items():
            out *= vertex_factor(d) ** n
        return out


def unscale_and_crt(pairs: Sequence[Tuple[int, int]], profile: DegreeProfile) -> int:
    """Divide each residue by the gadget scale modulo its prime, then combine.

    ``pairs`` holds (residue, modulus).  Inconsistent residues are not
    detected; the CRT value is returned regardless.
    """
    x, M = 0, 1
    for r, p in pairs:
        f = profile.factor() % p
        if math.gcd(f, p) != 1:
            raise MapError(f"scale factor not invertible mod {p}; need p larger than every degree")
        r = r * pow(f, -1, p) % p
        if math.gcd(M, p) != 1:
            raise MapError("moduli must be pairwise coprime")
        # x' = x (mod M), x' = r (mod p)
        k = (r - x) * pow(M, -1, p) % p
        x += M * k
        M *= p
    return x


def transition_system_bound(m: MixedMap) -> int:
    """Number of transition systems; an upper bound for #ET."""
    out = 1
    for d in m.degrees().values():
        out *= math.prod(range(d - 1, 0, -2))
    return out


# ---------------------------------------------------------------------------
# degree lowering
# ---------------------------------------------------------------------------

def _check_eulerian(g: MixedMap):
    if g.n_externals:
        raise MapError("input graph must be closed")
    g.check_even()
    if not g.is_connected():
        raise MapError("input graph must be connected")


def contract_degree2(g: MixedMap) -> MixedMap:
    """Suppress 2-valent vertices (tour counts are unchanged).

    A cycle made only of 2-valent vertices is kept as a single vertex with a loop.
    """
    _check_eulerian(g)
    twin = dict(g.twin)
    rot = dict(g.rotation)
    for v, r in list(rot.items()):
        if len(r) != 2 or len(rot) == 1:
            continue
        a, b = r
        ta, tb = twin[a], twin[b]
        if ta == b:  # isolated loop vertex; keep
            continue
        del rot[v]
        del twin[a], twin[b]
        twin[ta], twin[tb] = tb, ta
    edges = tuple(sorted({(min(a, b), max(a, b)) for a, b in twin.items()}))
    verts = tuple((v, r) for v, r in g.vertices if v in rot)
    return MixedMap(verts, edges, (), g.kind)


def _vertex_ports(g: MixedMap) -> Dict[int, Tuple[int, int]]:
    """half-edge -> (vertex position, slot)."""
    out = {}
    for i, (_, rot) in enumerate(g.vertices):
        for s, h in enumerate(rot):
            out[h] = (i, s)
    return out


def closed_q(d: int, p: int, realize: bool = False) -> GadgetNetwork:
    """Q(d, p) with outputs (1,2),(3,4),.. joined; externals are the inputs."""
    q = build_q(d, p, realize)
    links = [((0, d + 2 * j), (0, d + 2 * j + 1)) for j in range(d // 2)]
    return GadgetNetwork([q], links, [(0, i) for i in range(d)])


def _single_vertex(d: int, kind: str = "graph") -> MixedMap:
    b = MapBuilder(kind)
    for label, h in enumerate(b.vertex(d)):
        b.export(label, h)
    return b.build()


def expand_to_4regular(g: MixedMap, p: int, threshold: int = DEFAULT_THRESHOLD,
                       realize: bool = False) -> GadgetNetwork:
    """Replace every vertex of degree >= ``threshold`` by a closed Q(d, p).

    Returns a closed network; ``flatten()`` on a realized network gives the
    4-regular graph itself.
    """
    _check_eulerian(g)
    degs = g.degrees()
    if min(degs.values()) < 4:
        raise MapError("contract 2-valent vertices first (minimum degree must be 4)")
    if threshold < 4:
        raise MapError("threshold must be at least 4")
    if p <= max(degs.values()):
        raise MapError(f"need p > max degree {max(degs.values())}, got {p}")
    comps = []
    for v, rot in g.vertices:
        d = len(rot)
        if d >= threshold:
            comps.append(closed_q(d, p, realize))
        else:
            comps.append(_single_vertex(d))
    ports = _vertex_ports(g)
    links = [(ports[a], ports[b]) for a, b in g.edges]
    return GadgetNetwork(comps, links, [])


def count_mod_p(g: MixedMap, p: int, threshold: int = DEFAULT_THRESHOLD) -> int:
    return compose_vr(expand_to_4regular(g, p, threshold), modulus=p).closed_count % p


@dataclass
class CrtReport:
    count: int
    primes: List[int]
    residues: List[int]
    profile: Dict[int, int]
    threshold: int

    def to_dict(self) -> dict:
        return {"count": str(self.count), "primes": self.primes, "residues": self.residues,
                "profile": {str(k): v for k, v in self.profile.items()}, "threshold": self.threshold}


def et_via_crt(g: MixedMap, threshold: int = DEFAULT_THRESHOLD, primes: Optional[Sequence[int]] = None,
               workers: int = 1) -> CrtReport:
    """#ET of ``g`` from counts of its 4-regular expansions modulo several primes."""
    _check_eulerian(g)
    if primes is None:
        primes = select_primes(64, max(g.degrees().values()), transition_system_bound(g))
    primes = list(primes)
    if workers > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=workers) as pool:
            residues = list(pool.map(count_mod_p, [g] * len(primes), primes, [threshold] * len(primes)))
    else:
        residues = [count_mod_p(g, p, threshold) for p in primes]
    prof = DegreeProfile.of(g, threshold)
    T = unscale_and_crt(list(zip(residues, primes)), prof)
    return CrtReport(T, primes, residues, prof.counts, threshold)


# ---------------------------------------------------------------------------
# planarization
# ---------------------------------------------------------------------------

Point = Tuple[Fraction, Fraction]

# A crossing's four directions, in rotation order, go to these node terminals;
# opposite directions (one crossing edge) land on terminals 0,2 and 1,3.
CROSSING_TERMINALS = (0, 1, 2, 3)


def _orient(a: Point, b: Point, c: Point) -> Fraction:
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def _on_segment(a: Point, b: Point, c: Point) -> bool:
    return (min(a[0], b[0]) <= c[0] <= max(a[0], b[0])
            and min(a[1], b[1]) <= c[1] <= max(a[1], b[1]))


def convex_positions(n: int, seed: int = 0, jitter: float = 0.3) -> Dict[int, Point]:
    """Rational points on the unit circle, evenly spread with seeded angular jitter."""
    rng = random.Random(seed)
    pts = {}
    for i in range(n):
        theta = -math.pi + 2 * math.pi * (i + 0.5 + rng.uniform(-jitter, jitter)) / n
        t = Fraction(math.tan(theta / 2)).limit_denominator(10 ** 6)
        pts[i] = ((1 - t * t) / (1 + t * t), 2 * t / (1 + t * t))
    return pts


@dataclass
class CrossingReport:
    crossings: List[Tuple[Tuple[int, int], Tuple[int, int]]]  # pairs of crossing edges (vertex pairs)
    parts: List[List[int]]  # vertex sets: one per original vertex, then one per crossing node
    positions: Dict[int, Point]
    p: int

    def to_dict(self) -> dict:
        return {"p": self.p, "n_crossings": len(self.crossings),
                "crossings": [[list(e1), list(e2)] for e1, e2 in self.crossings],
                "positions": {str(v): [str(x), str(y)] for v, (x, y) in self.positions.items()}}


def _simple_edges(g: MixedMap) -> List[Tuple[int, int]]:
    seen = set()
    out = []
    for a, b in g.edges:
        u, w = g.vertex_of[a], g.vertex_of[b]
        if u == w:
            raise MapError("planarize needs a loop-free graph")
        key = (min(u, w), max(u, w))
        if key in seen:
            raise MapError("planarize needs a simple graph")
        seen.add(key)
        out.append((a, b))
    return out


def _crossings(g: MixedMap, pos: Dict[int, Point]):
    """Exact crossings of the straight-line drawing, or None if it is degenerate."""
    edges = _simple_edges(g)
    vpos = {v: pos[v] for v, _ in g.vertices}
    if len(set(vpos.values())) != len(vpos):
        return None
    ends = [(g.vertex_of[a], g.vertex_of[b]) for a, b in edges]
    for (u, w) in ends:
        for v, q in vpos.items():
            if v in (u, w):
                continue
            if _orient(vpos[u], vpos[w], q) == 0 and _on_segment(vpos[u], vpos[w], q):
                return None  # edge through a vertex
    found = []
    points = set()
    for i in range(len(ends)):
        u1, w1 = ends[i]
        P1, P2 = vpos[u1], vpos[w1]
        for j in range(i + 1, len(ends)):
            u2, w2 = ends[j]
            if len({u1, w1, u2, w2}) < 4:
                continue
            P3, P4 = vpos[u2], vpos[w2]
            o1, o2 = _orient(P1, P2, P3), _orient(P1, P2, P4)
            o3, o4 = _orient(P3, P4, P1), _orient(P3, P4, P2)
            if o1 * o2 < 0 and o3 * o4 < 0:
                s = o3 / (o3 - o4)  # parameter along edge i
                t = o1 / (o1 - o2)  # parameter along edge j
                pt = (P1[0] + s * (P2[0] - P1[0]), P1[1] + s * (P2[1] - P1[1]))
                if pt in points:
                    return None  # three edges through a point
                points.add(pt)
                found.append((i, j, s, t, pt))
            elif (o1 == 0 and o2 == 0):
                return None  # collinear overlap
    return edges, ends, found


def _cw_order(dirs: Dict[object, Point]) -> List[object]:
    """Keys sorted clockwise (decreasing angle), starting anywhere."""
    ang = {k: math.atan2(float(v[1]), float(v[0])) for k, v in dirs.items()}
    order = sorted(dirs, key=lambda k: -ang[k])
    vals = sorted(ang.values())
    if any(abs(x - y) < 1e-12 for x, y in zip(vals, vals[1:])):
        raise MapError("directions too close to order reliably")
    return order


def planarize(g: MixedMap, p: int, seed: int = 0, positions: Optional[Dict[int, Point]] = None,
              retries: int = 20) -> Tuple[MixedMap, CrossingReport]:
    """Draw ``g`` with straight lines and replace every crossing by an
    (0,X,Y)(p, p) node; returns a plane map and the crossing report."""
    _check_eulerian(g)
    if set(g.degrees().values()) != {4}:
        raise MapError("planarize needs a 4-regular graph")
    from .gadgets import _check_odd_prime
    _check_odd_prime(p)
    vids = [v for v, _ in g.vertices]
    result = None
    for attempt in range(retries if positions is None else 1):
        if positions is None:
            base = convex_positions(len(vids), seed + attempt)
            pos = {v: base[i] for i, v in enumerate(vids)}
        else:
            pos = {v: (Fraction(x), Fraction(y)) for v, (x, y) in positions.items()}
        result = _crossings(g, pos)
        if result is not None:
            break
    if result is None:
        raise MapError("could not find a drawing in general position")
    edges, ends, found = result
    node = build_0xy(p, p, kind="map")

    b = MapBuilder("map")
    # per edge: list of (param, crossing id) ordered from its first endpoint
    along: Dict[int, List[Tuple[Fraction, int]]] = {i: [] for i in range(len(edges))}
    for cid, (i, j, s, t, _) in enumerate(found):
        along[i].append((s, cid))
        along[j].append((t, cid))
    for i in along:
        along[i].sort()
    # half-edges at crossing cid keyed by (edge, +1 toward far end / -1 toward near end)
    cross_slot: Dict[Tuple[int, int, int], int] = {}
    parts: List[List[int]] = []
    vertex_half: Dict[int, int] = {}  # original half-edge -> new half-edge
    for v, rot in g.vertices:
        hs = b.half_edges(4)
        dirs = {}
        for h in rot:
            t = g.twin[h]
            dirs[h] = (pos[g.vertex_of[t]][0] - pos[v][0], pos[g.vertex_of[t]][1] - pos[v][1])
        order = _cw_order(dirs)
        for h, nh in zip(order, hs):
            vertex_half[h] = nh
        parts.append([b.vertex_with(hs)])
    for cid, (i, j, s, t, pt) in enumerate(found):
        dirs = {}
        for e in (i, j):
            u, w = ends[e]
            dv = (pos[w][0] - pos[u][0], pos[w][1] - pos[u][1])
            dirs[(e, 1)] = dv
            dirs[(e, -1)] = (-dv[0], -dv[1])
        order = _cw_order(dirs)
        first_vertex = b.n_vertices
        ren = b.embed(node)
        ext = dict(node.externals)
        parts.append(list(range(first_vertex, b.n_vertices)))
        for key, term in zip(order, CROSSING_TERMINALS):
            cross_slot[(cid, key[0], key[1])] = ren[ext[term]]
    for e, (a, bh) in enumerate(edges):
        chain = [vertex_half[a]]
        for _, cid in along[e]:
            chain.append(cross_slot[(cid, e, -1)])
            chain.append(cross_slot[(cid, e, 1)])
        chain.append(vertex_half[bh])
        for x, y in zip(chain[0::2], chain[1::2]):
            b.connect(x, y)
    out = b.build()
    trace_faces(out)  # raises unless plane
    crossings = [((ends[i][0], ends[i][1]), (ends[j][0], ends[j][1])) for i, j, *_ in found]
    return out, CrossingReport(crossings, parts, pos, p)


def count_planarized_mod_p(g: MixedMap, p: int, seed: int = 0) -> Tuple[int, CrossingReport]:
    gp, rep = planarize(g, p, seed)
    return count_closed(gp, engine="merge", parts=rep.parts, modulus=p), rep


# ---------------------------------------------------------------------------
# a-trail instance
# ---------------------------------------------------------------------------

def to_atrail_instance(g: MixedMap) -> MixedMap:
    """Replace each vertex of a 4-regular graph by the three-vertex map gadget."""
    _check_eulerian(g)
    if set(g.degrees().values()) != {4}:
        raise MapError("a-trail instance needs a 4-regular graph")
    gadget = build_deg4_map_gadget()
    ext = dict(gadget.externals)
    b = MapBuilder("map")
    new_half = {}
    for v, rot in g.vertices:
        ren = b.embed(gadget)
        for label, h in enumerate(rot):
            new_half[h] = ren[ext[label]]
    for a, c in g.edges:
        b.connect(new_half[a], new_half[c])
    return b.build()


# ---------------------------------------------------------------------------
# approximation-preserving reduction
# ---------------------------------------------------------------------------

def ap_layers(d: int, n: int, eps: float, C: float) -> int:
    """T_d = ceil(C d^2 ln d ln(4 d! n / eps)), at least one layer."""
    x = C * d * d * math.log(d) * math.log(4 * math.factorial(d) * n / eps)
    return max(1, math.ceil(x))


def shuffle_vertex_count(d: int, T: int) -> int:
    if T == 0:
        return d
    odd = (T + 1) // 2
    return odd * (d // 2) + (T - odd) * (d // 2 - 1)


def ap_normalizer_d(d: int, D: int) -> Fraction:
    """R_d = 2^{D_d} 2^{d/2} (d/2)! / d!."""
    return Fraction(2 ** D * 2 ** (d // 2) * math.factorial(d // 2), math.factorial(d))


@dataclass
class ApInstance:
    graph: MixedMap
    R: Fraction
    D: Dict[int, int]
    T: Dict[int, int]
    profile: Dict[int, int]

    def to_dict(self) -> dict:
        return {"R": str(self.R), "D": {str(k): v for k, v in self.D.items()},
                "T": {str(k): v for k, v in self.T.items()},
                "profile": {str(k): v for k, v in self.profile.items()},
                "n_vertices": self.graph.n_vertices}


def ap_instance(g: MixedMap, eps: float, C: Optional[float] = None,
                layers: Optional[Dict[int, int]] = None) -> ApInstance:
    """Replace each degree-d vertex by a sweep gadget of T_d layers with outputs paired."""
    _check_eulerian(g)
    if C is None:
        from .config import calibrated_constant
        C = calibrated_constant()
    degs = g.degrees()
    if min(degs.values()) < 4:
        raise MapError("contract 2-valent vertices first (minimum degree must be 4)")
    n = g.n_vertices
    prof = DegreeProfile.of(g).counts
    T = {d: (layers or {}).get(d) or ap_layers(d, n, eps, C) for d in prof}
    gadgets = {d: build_shuffle_gadget(d, T[d]) for d in prof}
    D = {d: gadgets[d].n_vertices for d in prof}
    b = MapBuilder("map")
    new_half = {}
    for v, rot in g.vertices:
        d = len(rot)
        gad = gadgets[d]
        ren = b.embed(gad)
        ext = dict(gad.externals)
        for label, h in enumerate(rot):
            new_half[h] = ren[ext[label]]
        for j in range(d // 2):
            b.connect(ren[ext[d + 2 * j]], ren[ext[d + 2 * j + 1]])
    for a, c in g.edges:
        b.connect(new_half[a], new_half[c])
    R = Fraction(1)
    for d, k in prof.items():
        R *= ap_normalizer_d(d, D[d]) ** k
    return ApInstance(b.build(), R, D, T, prof)


def exact_atrail_oracle(m: MixedMap, eps: float = 0.0) -> int:
    return count_closed(m, ATRAIL, engine="merge")


def estimate_et(g: MixedMap, eps: float, oracle: Callable = exact_atrail_oracle,
                C: Optional[float] = None):
    """Approximate #ET(g) as oracle(G', eps/2) / R; 3^n when eps > 2n."""
    _check_eulerian(g)
    n = g.n_vertices
    if eps > 2 * n:
        return Fraction(3 ** n)
    inst = ap_instance(g, eps, C)
    return Fraction(oracle(inst.graph, eps / 2)) / inst.R

"""Gadget builders with closed-form count oracles.

Four-terminal gadgets expose labels 0..3.  Their VR triples are listed in
the order (01|23, 02|13, 03|12).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .counting import GadgetNetwork, VRTable, compose_vr, count_vr, wire
from .graph import ATRAIL, FOUR_TYPES, GENERAL, MapBuilder, MapError, MixedMap, canonical_type

# ---------------------------------------------------------------------------
# small helpers
# ---------------------------------------------------------------------------


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _check_odd_prime(p: int):
    if not (isinstance(p, int) and p > 2 and is_prime(p)):
        raise MapError(f"p must be an odd prime, got {p}")


def triple_table(counts: Sequence[int], mode: str = GENERAL) -> VRTable:
    return VRTable((0, 1, 2, 3), dict(zip(FOUR_TYPES, counts)), mode)


class Handle:
    """Four (or more) exported half-edges of a piece living in a shared builder.

    Lets long glue chains be assembled in linear time: gluing just wires
    half-edge ids instead of copying maps.
    """

    __slots__ = ("ends",)

    def __init__(self, ends: Sequence[int]):
        self.ends = list(ends)


def place(b: MapBuilder, m: MixedMap) -> Handle:
    ren = b.embed(m)
    ends = [None] * m.n_externals
    for label, h in m.externals:
        ends[label] = ren[h]
    return Handle(ends)


def glue_handles(b: MapBuilder, h1: Handle, h2: Handle) -> Handle:
    """2-glue: labels 3,2 of the first piece meet labels 0,1 of the second."""
    b.connect(h1.ends[3], h2.ends[0])
    b.connect(h1.ends[2], h2.ends[1])
    return Handle([h1.ends[0], h1.ends[1], h2.ends[2], h2.ends[3]])


def relabel_handle(h: Handle, perm: Sequence[int]) -> Handle:
    """Old label ``l`` becomes ``perm[l]``."""
    ends = [None] * len(h.ends)
    for l, e in enumerate(h.ends):
        ends[perm[l]] = e
    return Handle(ends)


def finish(b: MapBuilder, h: Handle) -> MixedMap:
    for label, e in enumerate(h.ends):
        b.export(label, e)
    return b.build()


def glue_build(g1: MixedMap, g2: MixedMap) -> MixedMap:
    """Join half-edges 3,2 of ``g1`` to 0,1 of ``g2``; re-export the rest as 0..3."""
    for g in (g1, g2):
        if g.n_externals != 4:
            raise MapError("glue needs two 4-terminal gadgets")
    kind = "map" if g1.kind == g2.kind == "map" else "graph"
    b = MapBuilder(kind)
    return finish(b, glue_handles(b, place(b, g1), place(b, g2)))


def glue_chain(parts: Sequence[MixedMap]) -> MixedMap:
    """Left-to-right 2-glue of ``parts``."""
    if not parts:
        raise MapError("empty glue chain")
    kind = "map" if all(g.kind == "map" for g in parts) else "graph"
    b = MapBuilder(kind)
    h = place(b, parts[0])
    for g in parts[1:]:
        h = glue_handles(b, h, place(b, g))
    return finish(b, h)


# ---------------------------------------------------------------------------
# elementary gadgets
# ---------------------------------------------------------------------------

def sgg() -> MixedMap:
    """Single 4-valent graph vertex."""
    b = MapBuilder("graph")
    for label, h in enumerate(b.vertex(4)):
        b.export(label, h)
    return b.build()


def smg() -> MixedMap:
    """Single 4-valent map vertex, labels clockwise 0,1,3,2 (signature 1/2,1/2,0)."""
    b = MapBuilder("map")
    hs = b.vertex(4)
    for label, h in zip((0, 1, 3, 2), hs):
        b.export(label, h)
    return b.build()


def build_xyy(k: int, kind: str = "graph") -> MixedMap:
    """Double-edge ladder on ``k`` vertices; externals 0,1 at the first, 2,3 at the last.

    Rotations make the map plane with its terminals reading 0,2,3,1 around
    the outer face.
    """
    if not isinstance(k, int) or k < 1:
        raise MapError(f"k must be >= 1, got {k}")
    b = MapBuilder(kind)
    if k == 1:
        o0, o2, o3, o1 = b.vertex(4)
        for label, h in ((0, o0), (1, o1), (2, o2), (3, o3)):
            b.export(label, h)
        return b.build()
    o0, a, bb, o1 = b.vertex(4)
    b.export(0, o0)
    b.export(1, o1)
    for _ in range(k - 2):
        pa, na, nb, pb = b.vertex(4)
        b.connect(a, pa)
        b.connect(bb, pb)
        a, bb = na, nb
    pa, o2, o3, pb = b.vertex(4)
    b.connect(a, pa)
    b.connect(bb, pb)
    b.export(2, o2)
    b.export(3, o3)
    return b.build()


# ladder labels 0,1 | 2,3 re-read so that the box reads (A, A, B);
# the relabeled box has its terminals in order 0,1,2,3 around the outer face
OXY_PERM = (0, 3, 1, 2)


def build_0xy(p: int, k: int, kind: str = "graph") -> MixedMap:
    """Glue chain of ``p`` relabeled ladders of size ``k`` (``k*p`` vertices)."""
    _check_odd_prime(p)
    box = build_xyy(k, kind)
    b = MapBuilder(kind)
    h = relabel_handle(place(b, box), OXY_PERM)
    for _ in range(p - 1):
        h = glue_handles(b, h, relabel_handle(place(b, box), OXY_PERM))
    return finish(b, h)


# ---------------------------------------------------------------------------
# formulas
# ---------------------------------------------------------------------------

def xyy_counts(k: int) -> Tuple[int, int, int]:
    a = 2 ** (k - 1)
    return (k * a, a, a)


def oxy_counts(p: int, k: int) -> Tuple[int, int, int]:
    A = 2 ** (k - 1)
    B = k * A
    return (p * A * (A + B) ** (p - 1),
            ((A + B) ** p - (B - A) ** p) // 2,
            ((A + B) ** p + (B - A) ** p) // 2)


def r_d(d: int) -> int:
    out = 1
    for i in range(1, d):
        out *= 2 ** (i * (i - 1) // 2) * math.factorial(i)
    return out


def vertex_factor(d: int) -> int:
    """Per-vertex scale picked up when a degree-``d`` vertex becomes Q(d) with closed outputs."""
    return math.factorial(d // 2) * 2 ** (d // 2) * r_d(d)


def is_permutation_type(rt, d: int) -> bool:
    return all((a < d) != (b < d) for a, b in rt)


@dataclass(frozen=True)
class Blueprint:
    kind: str
    params: Dict[str, int] = field(default_factory=dict)

    def __hash__(self):
        return hash((self.kind, tuple(sorted(self.params.items()))))

    def build(self):
        p = self.params
        if self.kind == "xyy":
            return build_xyy(p["k"])
        if self.kind == "oxy":
            return build_0xy(p["p"], p["k"])
        if self.kind == "q":
            return build_q(p["d"], p["p"], realize=p.get("realize", False))
        if self.kind == "deg4map":
            return build_deg4_map_gadget()
        if self.kind == "shuffle":
            return build_shuffle_gadget(p["d"], p["T"])
        if self.kind == "crossover":
            return build_0xy(p["p"], p["p"], kind="map")
        raise MapError(f"unknown gadget kind {self.kind!r}")


def formula_oracle(bp: Blueprint) -> VRTable:
    """Closed-form table.  For ``q`` the counts are residues mod ``p``."""
    p = bp.params
    if bp.kind == "xyy":
        return triple_table(xyy_counts(p["k"]))
    if bp.kind == "oxy":
        return triple_table(oxy_counts(p["p"], p["k"]))
    if bp.kind == "q":
        d, mod = p["d"], p["p"]
        labels = tuple(range(2 * d))
        rd = r_d(d) % mod
        counts = {}
        for rt in VRTable(labels).types():
            if is_permutation_type(rt, d):
                counts[rt] = rd
        return VRTable(labels, counts)
    raise MapError(f"no formula for gadget kind {bp.kind!r}")


# ---------------------------------------------------------------------------
# Q(d, p)
# ---------------------------------------------------------------------------

def build_q(d: int, p: int, realize: bool = False) -> GadgetNetwork:
    """Recursive network: inputs IN_1..IN_d are labels 0..d-1, outputs OUT_j are d+j-1.

    Node ``i`` (parameter ``k = i``) takes IN_{d-i} on terminal 1, chains
    terminal 0 to the previous node's terminal 3, and feeds terminal 2 into
    input IN_{d-i} of Q(d-1).  With ``realize`` the nodes are concrete maps,
    otherwise they are stored by their closed-form tables.
    """
    if not isinstance(d, int) or d < 1:
        raise MapError(f"d must be >= 1, got {d}")
    _check_odd_prime(p)
    if p <= d:
        raise MapError(f"need p > d, got p={p}, d={d}")
    if d == 1:
        return GadgetNetwork([wire()], [], [(0, 0), (0, 1)])
    nodes = [build_0xy(p, i) if realize else triple_table(oxy_counts(p, i)) for i in range(1, d)]
    rect = build_q(d - 1, p, realize) if d > 2 else wire()
    comps = nodes + [rect]
    R = len(nodes)  # index of the recursive part
    links = []
    ext: Dict[int, Tuple[int, int]] = {}
    for i in range(1, d):
        c = i - 1
        if i == 1:
            ext[d - 1] = (c, 0)  # IN_d
        else:
            links.append(((c - 1, 3), (c, 0)))
        ext[d - i - 1] = (c, 1)  # IN_{d-i}
        links.append(((c, 2), (R, d - i - 1)))  # rectangle IN_{d-i}
    ext[2 * d - 1] = (d - 2, 3)  # OUT_d
    for j in range(1, d):
        ext[d + j - 1] = (R, (d - 1) + j - 1)  # rectangle OUT_j
    externals = [ext[l] for l in range(2 * d)]
    net = GadgetNetwork(comps, links, externals, names=[f"oxy({p},{i})" for i in range(1, d)] + [f"Q({d - 1})"])
    return net


# ---------------------------------------------------------------------------
# map gadgets
# ---------------------------------------------------------------------------

# Three map vertices, every pairing type realized by exactly two a-trail route sets.
# Rotations are clockwise; externals: 0 and 1 on vertex 0, 2 on vertex 1, 3 on vertex 2.
_DEG4_ROT = ((0, 1, 2, 3), (4, 5, 6, 7), (8, 9, 10, 11))
_DEG4_EDGES = ((1, 5), (3, 9), (6, 10), (7, 11))
_DEG4_EXTS = ((0, 0), (1, 2), (2, 4), (3, 8))


def build_deg4_map_gadget() -> MixedMap:
    """Three-vertex map gadget with a-trail table (2, 2, 2).

    Found by exhaustive search over all 3-vertex rotation systems; no such
    gadget keeps its four terminals on one face of a plane embedding, so
    this one has genus 1 once capped.
    """
    return MixedMap(tuple(enumerate(_DEG4_ROT)), _DEG4_EDGES, _DEG4_EXTS, "map")


def build_shuffle_gadget(d: int, T: int) -> MixedMap:
    """Layered sweep gadget: inputs are labels 0..d-1, outputs d..2d-1.

    Layer ``t`` (1-based) joins lanes (0,1),(2,3),.. when odd and
    (1,2),(3,4),.. when even, each at a vertex whose rotation keeps the two
    incoming half-edges opposite.  With ``T = 0`` each lane is one 2-valent
    vertex.
    """
    if not isinstance(d, int) or d < 2 or d % 2:
        raise MapError(f"d must be even and >= 2, got {d}")
    if not isinstance(T, int) or T < 0:
        raise MapError(f"T must be >= 0, got {T}")
    if T == 0:
        b = MapBuilder("map")
        for lane in range(d):
            hin, hout = b.vertex(2)
            b.export(lane, hin)
            b.export(d + lane, hout)
        return b.build()
    b = MapBuilder("map")
    ends: List[Optional[int]] = [None] * d  # pending half-edge per lane, or None for an external input
    for t in range(1, T + 1):
        start = 0 if t % 2 else 1
        for a in range(start, d - 1, 2):
            pa, na, pb, nb = b.vertex(4)
            for lane, h in ((a, pa), (a + 1, pb)):
                if ends[lane] is None:
                    b.export(lane, h)
                else:
                    b.connect(ends[lane], h)
            ends[a], ends[a + 1] = na, nb
    for lane in range(d):
        b.export(d + lane, ends[lane])
    return b.build()


def smg_variant(perm: Sequence[int]) -> MixedMap:
    from .graph import relabel
    return relabel(smg(), perm)


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------

def verify(bp: Blueprint) -> dict:
    """Build ``bp``, count it, and compare with the oracle."""
    if bp.kind in ("xyy", "oxy"):
        got = count_vr(bp.build())
        want = formula_oracle(bp)
        ok = got == want
        return {"kind": bp.kind, "params": dict(bp.params), "expected": list(map(str, want.triple())),
                "got": list(map(str, got.triple())), "pass": ok}
    if bp.kind == "q":
        d, p = bp.params["d"], bp.params["p"]
        got = compose_vr(bp.build(), modulus=p)
        want = formula_oracle(bp)
        ok = all(got[t] % p == want[t] for t in want.types())
        return {"kind": "q", "params": dict(bp.params), "R_d": str(r_d(d)), "modulus": p, "pass": ok}
    if bp.kind == "deg4map":
        got = count_vr(build_deg4_map_gadget(), ATRAIL)
        return {"kind": "deg4map", "got": list(map(str, got.triple())), "pass": got.triple() == (2, 2, 2)}
    if bp.kind == "shuffle":
        from .chain import gadget_chain_check
        ok = gadget_chain_check(bp.params["d"], bp.params["T"])
        return {"kind": "shuffle", "params": dict(bp.params), "pass": ok}
    if bp.kind == "crossover":
        p = bp.params["p"]
        got = count_vr(bp.build(), engine="merge", modulus=p)
        ok = got.triple() == (0, 1, 0)
        return {"kind": "crossover", "params": dict(bp.params), "residues": list(got.triple()), "pass": ok}
    raise MapError(f"unknown gadget kind {bp.kind!r}")

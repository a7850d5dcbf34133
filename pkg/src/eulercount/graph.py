"""Half-edge multigraphs and maps, transition systems, and route tracing.

A :class:`MixedMap` is the single representation used throughout the package
for closed graphs, rotation-system maps and gadgets with labelled external
half-edges.  Every half-edge sits in exactly one vertex rotation and is either
glued to a twin (an edge) or exported under an external label.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

GENERAL = "general"
ATRAIL = "a-trail"
MODES = (GENERAL, ATRAIL)

Pair = Tuple[int, int]
RouteType = Tuple[Pair, ...]


class MapError(ValueError):
    """Raised for structurally invalid maps or unsupported inputs."""


def check_mode(mode: str) -> str:
    if mode not in MODES:
        raise MapError(f"unknown mode {mode!r}; expected one of {MODES}")
    return mode


# ---------------------------------------------------------------------------
# route types
# ---------------------------------------------------------------------------

def canonical_type(pairs) -> RouteType:
    """Sort each pair internally, then the pairs lexicographically."""
    return tuple(sorted(tuple(sorted(p)) for p in pairs))


def format_type(rt: RouteType) -> str:
    """``((0, 1), (2, 3))`` -> ``"{0,1}{2,3}"``."""
    return "".join("{%s,%s}" % p for p in rt)


def parse_type(text: str) -> RouteType:
    body = text.strip()
    if not (body.startswith("{") and body.endswith("}")):
        raise MapError(f"bad route type {text!r}")
    pairs = []
    for chunk in body[1:-1].split("}{"):
        a, b = chunk.split(",")
        pairs.append((int(a), int(b)))
    return canonical_type(pairs)


def perfect_matchings(items: Sequence) -> Iterator[Tuple[Tuple, ...]]:
    """All perfect matchings of ``items`` in a fixed deterministic order."""
    items = list(items)
    if not items:
        yield ()
        return
    if len(items) % 2:
        raise MapError("odd number of items has no perfect matching")
    first = items[0]
    for i in range(1, len(items)):
        rest = items[1:i] + items[i + 1:]
        for m in perfect_matchings(rest):
            yield ((first, items[i]),) + m


def n_pairings(degree: int) -> int:
    """Number of perfect matchings of ``degree`` slots, D!/(2^(D/2) (D/2)!)."""
    if degree % 2:
        raise MapError(f"odd degree {degree}")
    out = 1
    for k in range(degree - 1, 0, -2):
        out *= k
    return out


FOUR_TYPES: Tuple[RouteType, RouteType, RouteType] = (
    ((0, 1), (2, 3)),
    ((0, 2), (1, 3)),
    ((0, 3), (1, 2)),
)


# ---------------------------------------------------------------------------
# the map
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MixedMap:
    """Multigraph or rotation-system map with optional external half-edges.

    ``vertices`` holds ``(vertex_id, rotation)`` where ``rotation`` lists the
    incident half-edges in clockwise order (for ``kind == "map"``; for graphs
    the order carries no meaning).  ``edges`` are unordered half-edge pairs and
    ``externals`` are ``(label, half_edge)`` with labels exactly ``0..2d-1``.
    """

    vertices: Tuple[Tuple[int, Tuple[int, ...]], ...]
    edges: Tuple[Pair, ...]
    externals: Tuple[Pair, ...] = ()
    kind: str = "graph"

    def __post_init__(self):
        object.__setattr__(self, "vertices",
                           tuple((int(v), tuple(int(h) for h in rot)) for v, rot in self.vertices))
        object.__setattr__(self, "edges", tuple((int(a), int(b)) for a, b in self.edges))
        object.__setattr__(self, "externals",
                           tuple(sorted((int(l), int(h)) for l, h in self.externals)))
        self._validate()

    def _validate(self):
        if self.kind not in ("graph", "map"):
            raise MapError(f"kind must be 'graph' or 'map', got {self.kind!r}")
        seen_v = set()
        owner = {}
        for v, rot in self.vertices:
            if v in seen_v:
                raise MapError(f"duplicate vertex id {v}")
            seen_v.add(v)
            for h in rot:
                if h < 0:
                    raise MapError(f"negative half-edge id {h}")
                if h in owner:
                    raise MapError(f"half-edge {h} appears in two rotations")
                owner[h] = v
        used = set()
        for a, b in self.edges:
            for h in (a, b):
                if h not in owner:
                    raise MapError(f"dangling half-edge {h} in edge ({a}, {b})")
                if h in used:
                    raise MapError(f"half-edge reused: {h}")
                used.add(h)
            if a == b:
                raise MapError(f"edge ({a}, {b}) glues a half-edge to itself")
        labels = []
        for label, h in self.externals:
            if h not in owner:
                raise MapError(f"dangling half-edge {h} for external label {label}")
            if h in used:
                raise MapError(f"half-edge reused: {h}")
            used.add(h)
            labels.append(label)
        if sorted(labels) != list(range(len(labels))) or len(labels) % 2:
            raise MapError(f"external labels must be 0..2d-1, got {sorted(labels)}")
        for h in owner:
            if h not in used:
                raise MapError(f"half-edge {h} is neither in an edge nor external")

    # -- derived structure --------------------------------------------------

    @cached_property
    def vertex_of(self) -> Dict[int, int]:
        return {h: v for v, rot in self.vertices for h in rot}

    @cached_property
    def rotation(self) -> Dict[int, Tuple[int, ...]]:
        return dict(self.vertices)

    @cached_property
    def twin(self) -> Dict[int, int]:
        out = {}
        for a, b in self.edges:
            out[a] = b
            out[b] = a
        return out

    @cached_property
    def label_of(self) -> Dict[int, int]:
        return {h: l for l, h in self.externals}

    @cached_property
    def half_edge_of(self) -> Dict[int, int]:
        return dict(self.externals)

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def n_externals(self) -> int:
        return len(self.externals)

    @property
    def is_closed(self) -> bool:
        return not self.externals

    def degree(self, v: int) -> int:
        return len(self.rotation[v])

    def degrees(self) -> Dict[int, int]:
        return {v: len(rot) for v, rot in self.vertices}

    def degree_profile(self) -> Dict[int, int]:
        prof: Dict[int, int] = {}
        for _, rot in self.vertices:
            prof[len(rot)] = prof.get(len(rot), 0) + 1
        return dict(sorted(prof.items()))

    def check_even(self):
        for v, rot in self.vertices:
            if len(rot) % 2:
                raise MapError(f"vertex {v} has odd degree {len(rot)}")

    def neighbours(self, v: int) -> List[int]:
        return [self.vertex_of[self.twin[h]] for h in self.rotation[v] if h in self.twin]

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        start = self.vertices[0][0]
        seen = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for w in self.neighbours(v):
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(self.vertices)

    def edge_multiset(self) -> List[Pair]:
        return sorted(tuple(sorted((self.vertex_of[a], self.vertex_of[b]))) for a, b in self.edges)

    def with_kind(self, kind: str) -> "MixedMap":
        return MixedMap(self.vertices, self.edges, self.externals, kind)

    # -- serialization ------------------------------------------------------

    def canonical(self) -> "MixedMap":
        """Relabel half-edges 0.. in vertex/rotation order."""
        ren = {}
        for _, rot in self.vertices:
            for h in rot:
                ren[h] = len(ren)
        verts = tuple((v, tuple(ren[h] for h in rot)) for v, rot in self.vertices)
        edges = tuple(sorted(tuple(sorted((ren[a], ren[b]))) for a, b in self.edges))
        exts = tuple((l, ren[h]) for l, h in self.externals)
        return MixedMap(verts, edges, exts, self.kind)

    def to_dict(self) -> dict:
        c = self.canonical()
        return {
            "kind": c.kind,
            "vertices": [{"id": v, "rotation": list(rot)} for v, rot in c.vertices],
            "edges": [list(e) for e in c.edges],
            "externals": [{"label": l, "half_edge": h} for l, h in c.externals],
        }

    def to_json(self) -> str:
        return dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "MixedMap":
        try:
            kind = data["kind"]
            verts = [(d["id"], d["rotation"]) for d in data["vertices"]]
            edges = [tuple(e) for e in data["edges"]]
            exts = [(d["label"], d["half_edge"]) for d in data.get("externals", [])]
        except (KeyError, TypeError) as exc:
            raise MapError(f"malformed map document: {exc}") from exc
        for e in edges:
            if len(e) != 2:
                raise MapError(f"edge {list(e)} must have two half-edges")
        return cls(tuple(verts), tuple(edges), tuple(exts), kind)

    @classmethod
    def from_json(cls, text: str) -> "MixedMap":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise MapError(f"invalid JSON: {exc}") from exc
        return cls.from_dict(data)


def dumps(obj) -> str:
    """Canonical compact JSON used for every document the package writes."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def load_map(path) -> MixedMap:
    with open(path, encoding="utf-8") as fh:
        return MixedMap.from_json(fh.read())


class MapBuilder:
    """Incremental constructor handing out fresh half-edge ids.

    >>> b = MapBuilder()
    >>> v = b.vertex(4)
    >>> for label, h in enumerate(v): b.export(label, h)
    >>> b.build().n_externals
    4
    """

    def __init__(self, kind: str = "graph"):
        self.kind = kind
        self._verts: List[Tuple[int, Tuple[int, ...]]] = []
        self._edges: List[Pair] = []
        self._exts: Dict[int, int] = {}
        self._next_h = 0

    @property
    def n_vertices(self) -> int:
        return len(self._verts)

    def vertex(self, degree: int) -> List[int]:
        hs = list(range(self._next_h, self._next_h + degree))
        self._next_h += degree
        self._verts.append((len(self._verts), tuple(hs)))
        return hs

    def vertex_with(self, rotation: Sequence[int]) -> int:
        """Add a vertex whose rotation is a permutation of pre-allocated ids."""
        self._verts.append((len(self._verts), tuple(rotation)))
        return len(self._verts) - 1

    def half_edges(self, n: int) -> List[int]:
        hs = list(range(self._next_h, self._next_h + n))
        self._next_h += n
        return hs

    def connect(self, a: int, b: int):
        self._edges.append((a, b))

    def export(self, label: int, h: int):
        if label in self._exts:
            raise MapError(f"external label {label} used twice")
        self._exts[label] = h

    def embed(self, m: MixedMap) -> Dict[int, int]:
        """Copy ``m`` in with fresh ids; returns old->new half-edge map.

        Externals of ``m`` are *not* exported; the caller wires them.
        """
        ren = {}
        for _, rot in m.vertices:
            for h in rot:
                ren[h] = self._next_h
                self._next_h += 1
        for _, rot in m.vertices:
            self._verts.append((len(self._verts), tuple(ren[h] for h in rot)))
        for a, b in m.edges:
            self._edges.append((ren[a], ren[b]))
        return ren

    def build(self) -> MixedMap:
        return MixedMap(tuple(self._verts), tuple(self._edges),
                        tuple(self._exts.items()), self.kind)


def relabel(m: MixedMap, perm) -> MixedMap:
    """Rename external labels: old label ``l`` becomes ``perm[l]``."""
    perm = list(perm)
    if sorted(perm) != list(range(m.n_externals)):
        raise MapError(f"label permutation {perm} does not match {m.n_externals} externals")
    return MixedMap(m.vertices, m.edges, tuple((perm[l], h) for l, h in m.externals), m.kind)


def cap_externals(m: MixedMap) -> MixedMap:
    """Close a gadget by a single extra vertex holding all externals.

    The new vertex lists the external half-edges in decreasing label order,
    which is the orientation that keeps a plane gadget (terminals clockwise
    0,1,2,... on its outer face) plane.
    """
    b = MapBuilder(m.kind)
    ren = b.embed(m)
    caps = b.half_edges(m.n_externals)
    b.vertex_with(caps[::-1])
    for (label, h), c in zip(m.externals, caps):
        b.connect(ren[h], c)
    return b.build()


# ---------------------------------------------------------------------------
# transition systems
# ---------------------------------------------------------------------------

def vertex_pairings(m: MixedMap, v: int, mode: str) -> List[Tuple[Pair, ...]]:
    """Pairings of the half-edges at ``v`` allowed in ``mode``."""
    rot = m.rotation[v]
    d = len(rot)
    if d % 2:
        raise MapError(f"vertex {v} has odd degree {d}")
    if mode == GENERAL:
        return [tuple(p) for p in perfect_matchings(rot)]
    if m.kind != "map":
        raise MapError("a-trail mode needs kind='map'")
    if d == 0:
        return [()]
    if d == 2:
        return [((rot[0], rot[1]),)]
    first = tuple((rot[i], rot[i + 1]) for i in range(0, d, 2))
    second = tuple((rot[i], rot[(i + 1) % d]) for i in range(1, d, 2))
    return [first, second]


@dataclass(frozen=True)
class TransitionSystem:
    """Per-vertex pairing of incident half-edges."""

    pairs: Tuple[Tuple[int, Tuple[Pair, ...]], ...]

    def as_dict(self) -> Dict[int, Tuple[Pair, ...]]:
        return dict(self.pairs)

    def partner(self) -> Dict[int, int]:
        out = {}
        for _, ps in self.pairs:
            for a, b in ps:
                out[a] = b
                out[b] = a
        return out


def transition_systems(m: MixedMap, mode: str = GENERAL,
                       prefix: Sequence[int] = ()) -> Iterator[TransitionSystem]:
    """Enumerate the product set of per-vertex pairings.

    ``prefix`` fixes the pairing index of the first ``len(prefix)`` vertices,
    so disjoint prefixes partition the stream for independent consumers.
    """
    check_mode(mode)
    m.check_even()
    choices = [vertex_pairings(m, v, mode) for v, _ in m.vertices]
    for i, idx in enumerate(prefix):
        choices[i] = [choices[i][idx]]
    ids = [v for v, _ in m.vertices]
    for combo in itertools.product(*choices):
        yield TransitionSystem(tuple(zip(ids, combo)))


def prefixes(m: MixedMap, mode: str, depth: int) -> List[Tuple[int, ...]]:
    """Disjoint assignment prefixes over the first ``depth`` vertices."""
    depth = min(depth, m.n_vertices)
    sizes = [len(vertex_pairings(m, v, mode)) for v, _ in m.vertices[:depth]]
    return list(itertools.product(*(range(s) for s in sizes)))


def is_atrail_pairing(rot: Sequence[int], pairs: Sequence[Pair]) -> bool:
    d = len(rot)
    pos = {h: i for i, h in enumerate(rot)}
    for a, b in pairs:
        gap = (pos[a] - pos[b]) % d
        if gap not in (1, d - 1):
            return False
    return True


@dataclass(frozen=True)
class RouteDecomposition:
    """Routes between external labels plus closed cycles.

    ``routes`` holds ``(start_label, end_label, trail)`` where ``trail`` is the
    sequence of half-edges visited; ``cycles`` holds the closed trails.
    """

    routes: Tuple[Tuple[int, int, Tuple[int, ...]], ...]
    cycles: Tuple[Tuple[int, ...], ...]

    @property
    def closed_cycles(self) -> int:
        return len(self.cycles)

    def route_type(self) -> RouteType:
        return canonical_type((a, b) for a, b, _ in self.routes)

    def edge_multiset(self, m: MixedMap) -> List[Pair]:
        seen = set()
        out = []
        for trail in [r[2] for r in self.routes] + list(self.cycles):
            for h in trail:
                t = m.twin.get(h)
                if t is None:
                    continue
                key = (min(h, t), max(h, t))
                if key in seen:
                    continue
                seen.add(key)
                out.append(tuple(sorted((m.vertex_of[h], m.vertex_of[t]))))
        return sorted(out)


def trace(m: MixedMap, ts: TransitionSystem, mode: str = GENERAL) -> Optional[RouteDecomposition]:
    """Follow half-edge -> pairing partner -> twin until every edge is used.

    Returns ``None`` when ``mode`` is a-trail and some pair is not cyclicly
    adjacent in its vertex rotation.
    """
    check_mode(mode)
    pairing = ts.as_dict()
    if set(pairing) != set(m.rotation):
        raise MapError("transition system does not cover every vertex")
    if mode == ATRAIL:
        if m.kind != "map":
            raise MapError("a-trail mode needs kind='map'")
        for v, ps in pairing.items():
            if not is_atrail_pairing(m.rotation[v], ps):
                return None
    partner = ts.partner()
    visited = set()
    routes = []
    for label, h in m.externals:
        if h in visited:
            continue
        trail = []
        cur = h
        while True:
            visited.add(cur)
            trail.append(cur)
            nxt = partner[cur]
            visited.add(nxt)
            trail.append(nxt)
            if nxt in m.label_of:
                routes.append((label, m.label_of[nxt], tuple(trail)))
                break
            cur = m.twin[nxt]
    cycles = []
    for a, b in m.edges:
        if a in visited:
            continue
        trail = []
        cur = a
        while cur not in visited:
            visited.add(cur)
            trail.append(cur)
            nxt = partner[cur]
            visited.add(nxt)
            trail.append(nxt)
            cur = m.twin[nxt]
        cycles.append(tuple(trail))
    return RouteDecomposition(tuple(routes), tuple(cycles))

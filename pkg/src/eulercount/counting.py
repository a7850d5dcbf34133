"""Exact counting of valid route sets, closed tours, and gadget networks.

Two engines produce the same numbers:

* ``brute`` walks every transition system (depth-first, abandoning a partial
  assignment as soon as it closes a cycle that cannot be the final tour).
  It is the ground truth.
* ``merge`` splits a map into per-vertex (or caller-supplied) parts and folds
  their route tables together through the shared links.  It scales to the
  large reductions.
"""

from __future__ import annotations

import heapq
import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, Hashable, Iterable, List, Optional, Sequence, Tuple, Union

from .graph import (ATRAIL, FOUR_TYPES, GENERAL, MapError, MixedMap, RouteType,
                    canonical_type, check_mode, format_type, parse_type,
                    perfect_matchings, vertex_pairings)

Number = Union[int, "Fraction", float]  # noqa: F821


# ---------------------------------------------------------------------------
# VR tables
# ---------------------------------------------------------------------------

@dataclass
class VRTable:
    """Route-type -> count over the perfect matchings of ``labels``.

    Absent keys count zero.  A closed table (``labels == ()``) stores the
    number of single-tour configurations under the empty key.
    """

    labels: Tuple[int, ...]
    counts: Dict[RouteType, Number] = field(default_factory=dict)
    mode: str = GENERAL

    def __post_init__(self):
        self.labels = tuple(self.labels)
        self.counts = {canonical_type(k): v for k, v in self.counts.items() if v}

    def __getitem__(self, rt) -> Number:
        return self.counts.get(canonical_type(rt), 0)

    def types(self) -> List[RouteType]:
        return list(perfect_matchings(list(self.labels)))

    def total(self) -> Number:
        return sum(self.counts.values())

    def triple(self) -> Tuple[Number, Number, Number]:
        """Counts on (01|23, 02|13, 03|12) for a four-terminal table."""
        if self.labels != (0, 1, 2, 3):
            raise MapError("triple() needs exactly the labels 0..3")
        return tuple(self.counts.get(t, 0) for t in FOUR_TYPES)

    @property
    def closed_count(self) -> Number:
        if self.labels:
            raise MapError("table is not closed")
        return self.counts.get((), 0)

    def reduce(self, modulus: int) -> "VRTable":
        return VRTable(self.labels, {k: v % modulus for k, v in self.counts.items()}, self.mode)

    def relabel(self, perm: Sequence[int]) -> "VRTable":
        counts = {canonical_type((perm[a], perm[b]) for a, b in k): v for k, v in self.counts.items()}
        return VRTable(tuple(sorted(perm[l] for l in self.labels)), counts, self.mode)

    def to_rows(self) -> List[dict]:
        return [{"type": format_type(k), "count": str(self.counts.get(k, 0))}
                for k in sorted(set(self.types()) | set(self.counts))]

    def to_dict(self) -> dict:
        return {"mode": self.mode, "labels": list(self.labels), "table": self.to_rows()}

    @classmethod
    def from_dict(cls, data: dict) -> "VRTable":
        counts = {parse_type(r["type"]) if r["type"] else (): int(r["count"]) for r in data["table"]}
        return cls(tuple(data["labels"]), counts, data.get("mode", GENERAL))

    def __eq__(self, other):
        if not isinstance(other, VRTable):
            return NotImplemented
        return self.labels == other.labels and self.counts == other.counts


def wire() -> VRTable:
    """Two-terminal identity connection with no edges (``IN_1 = OUT_1``)."""
    return VRTable((0, 1), {((0, 1),): 1})


# ---------------------------------------------------------------------------
# brute force
# ---------------------------------------------------------------------------

class _Search:
    """Depth-first enumeration of transition systems with cycle pruning."""

    def __init__(self, m: MixedMap, mode: str, closed: bool):
        self.closed = closed
        dense = {}
        for _, rot in m.vertices:
            for h in rot:
                dense[h] = len(dense)
        H = len(dense)
        self.H = H
        other = [0] * (H + m.n_externals)
        for a, b in m.edges:
            other[dense[a]] = dense[b]
            other[dense[b]] = dense[a]
        for label, h in m.externals:
            other[dense[h]] = H + label
            other[H + label] = dense[h]
        self.base = other
        self.n_labels = m.n_externals
        order = _bfs_order(m)
        self.choices = [[tuple((dense[a], dense[b]) for a, b in p) for p in vertex_pairings(m, v, mode)]
                        for v in order]
        self.total_joins = H // 2

    def run(self, prefix: Sequence[int] = ()) -> Dict[RouteType, int]:
        other = list(self.base)
        out: Dict[RouteType, int] = {}
        choices = list(self.choices)
        for i, idx in enumerate(prefix):
            choices[i] = [choices[i][idx]]
        n = len(choices)
        H = self.H
        closed = self.closed
        total = self.total_joins

        def rec(i: int, joins: int):
            if i == n:
                if closed:
                    return  # counted at the closing join
                key = tuple((l, other[H + l] - H) for l in range(self.n_labels)
                            if l < other[H + l] - H)
                out[key] = out.get(key, 0) + 1
                return
            for pairing in choices[i]:
                undo = []
                ok = True
                j = joins
                for a, b in pairing:
                    j += 1
                    if other[a] == b:
                        # closing a cycle: only the very last join of a closed tour survives
                        if closed and j == total:
                            out[()] = out.get((), 0) + 1
                        ok = False
                        break
                    x, y = other[a], other[b]
                    undo.append((x, y, a, b))
                    other[x] = y
                    other[y] = x
                if ok:
                    rec(i + 1, j)
                for x, y, a, b in reversed(undo):
                    other[x] = a
                    other[y] = b

        rec(0, 0)
        return out


def _bfs_order(m: MixedMap) -> List[int]:
    seen = []
    mark = set()
    for v0, _ in m.vertices:
        if v0 in mark:
            continue
        mark.add(v0)
        queue = [v0]
        while queue:
            v = queue.pop(0)
            seen.append(v)
            for w in m.neighbours(v):
                if w not in mark:
                    mark.add(w)
                    queue.append(w)
    return seen


def _run_prefix(args):
    m, mode, closed, prefix = args
    return _Search(m, mode, closed).run(prefix)


PARALLEL_MIN = 3 ** 9  # smaller search spaces are not worth a process pool


def _brute(m: MixedMap, mode: str, closed: bool, workers: int = 1) -> Dict[RouteType, int]:
    search = _Search(m, mode, closed)
    if workers <= 1 or not search.choices or math.prod(map(len, search.choices)) < PARALLEL_MIN:
        return search.run()
    depth = 0
    size = 1
    while depth < len(search.choices) and size < 4 * workers:
        size *= len(search.choices[depth])
        depth += 1
    prefs = list(itertools.product(*(range(len(c)) for c in search.choices[:depth])))
    out: Dict[RouteType, int] = {}
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for part in pool.map(_run_prefix, [(m, mode, closed, p) for p in prefs]):
            for k, v in part.items():
                out[k] = out.get(k, 0) + v
    return out


def _check_counting_input(m: MixedMap, mode: str):
    check_mode(mode)
    m.check_even()
    if mode == ATRAIL and m.kind != "map":
        raise MapError("a-trail mode needs kind='map'")


def count_vr(m: MixedMap, mode: str = GENERAL, engine: str = "brute",
             workers: int = 1, modulus: Optional[int] = None) -> VRTable:
    """Exact count of valid route sets of each type.

    A transition system contributes to type ``t`` when its trace pairs the
    external labels as ``t`` and leaves no closed cycle.
    """
    _check_counting_input(m, mode)
    if m.n_externals < 2:
        raise MapError("count_vr needs at least two external half-edges")
    if engine == "brute":
        table = VRTable(tuple(range(m.n_externals)), _brute(m, mode, False, workers), mode)
    elif engine == "merge":
        table = compose_vr(GadgetNetwork.from_map(m, mode=mode), modulus=modulus)
    else:
        raise MapError(f"unknown engine {engine!r}")
    return table.reduce(modulus) if modulus else table


def count_closed(m: MixedMap, mode: str = GENERAL, engine: str = "brute",
                 workers: int = 1, parts: Optional[Sequence[Sequence[int]]] = None,
                 modulus: Optional[int] = None) -> int:
    """Number of Eulerian tours (general) or A-trails (a-trail) of a closed map.

    Tours are counted as transition systems tracing to one closed cycle.
    """
    _check_counting_input(m, mode)
    if m.n_externals:
        raise MapError("count_closed needs a closed map (no externals)")
    if not m.edges:
        raise MapError("count_closed needs at least one edge")
    if not m.is_connected():
        raise MapError("count_closed needs a connected map")
    if engine == "brute":
        n = _brute(m, mode, True, workers).get((), 0)
    elif engine == "merge":
        n = compose_vr(GadgetNetwork.from_map(m, parts=parts, mode=mode), modulus=modulus).closed_count
    else:
        raise MapError(f"unknown engine {engine!r}")
    return n % modulus if modulus else n


# ---------------------------------------------------------------------------
# gadget networks
# ---------------------------------------------------------------------------

Port = Tuple[int, int]  # (component index, component label)
Component = Union[VRTable, "GadgetNetwork", MixedMap]


@dataclass
class GadgetNetwork:
    """Components wired together by links between their labels.

    ``externals[i]`` is the port exported as network label ``i``.  Every
    component label is used exactly once, either by one link or as an
    external.  Components may be tables, maps, or nested networks.
    """

    components: List[Component]
    links: List[Tuple[Port, Port]]
    externals: List[Port]
    mode: str = GENERAL
    names: List[str] = field(default_factory=list)

    def __post_init__(self):
        used = {}
        for a, b in self.links:
            for p in (a, b):
                if p in used:
                    raise MapError(f"port {p} used twice")
                used[p] = "link"
        for p in self.externals:
            if p in used:
                raise MapError(f"port {p} used twice")
            used[p] = "ext"
        for ci, comp in enumerate(self.components):
            for l in component_labels(comp):
                if (ci, l) not in used:
                    raise MapError(f"port {(ci, l)} is unused")
        for p in used:
            if p[0] >= len(self.components) or p[1] not in component_labels(self.components[p[0]]):
                raise MapError(f"port {p} does not exist")
        if len(self.externals) % 2:
            raise MapError("network needs an even number of externals")

    @property
    def labels(self) -> Tuple[int, ...]:
        return tuple(range(len(self.externals)))

    @classmethod
    def from_map(cls, m: MixedMap, parts: Optional[Sequence[Sequence[int]]] = None,
                 mode: str = GENERAL) -> "GadgetNetwork":
        """Split ``m`` into sub-maps along a vertex partition (default: singletons).

        Cut edges become links; each part exports its boundary half-edges in
        rotation order.
        """
        if parts is None:
            parts = [[v] for v, _ in m.vertices]
        part_of = {}
        for pi, part in enumerate(parts):
            for v in part:
                if v in part_of:
                    raise MapError(f"vertex {v} in two parts")
                part_of[v] = pi
        if set(part_of) != set(m.rotation):
            raise MapError("parts must cover every vertex exactly once")
        comps = []
        port_of = {}
        for pi, part in enumerate(parts):
            inside = set(part)
            verts = [(v, m.rotation[v]) for v in part]
            edges = []
            exts = []
            for v in part:
                for h in m.rotation[v]:
                    t = m.twin.get(h)
                    if t is not None and m.vertex_of[t] in inside:
                        if h < t:
                            edges.append((h, t))
                    else:
                        port_of[h] = (pi, len(exts))
                        exts.append((len(exts), h))
            comps.append(MixedMap(tuple(verts), tuple(edges), tuple(exts), m.kind))
        links = []
        for a, b in m.edges:
            if a in port_of and b in port_of:
                links.append((port_of[a], port_of[b]))
        externals = [port_of[h] for _, h in m.externals]
        return cls(comps, links, externals, mode)

    def flatten(self) -> MixedMap:
        """Realize the network as one map.

        Every component must be a map, a nested network, or a wire; a chain
        of wires joining two externals directly cannot be realized.
        """
        from .graph import MapBuilder
        pieces = []
        kinds = set()
        for comp in self.components:
            if isinstance(comp, GadgetNetwork):
                comp = comp.flatten()
            if isinstance(comp, MixedMap):
                kinds.add(comp.kind)
            elif not (isinstance(comp, VRTable) and comp == wire()):
                raise MapError("cannot flatten a component known only by its table")
            pieces.append(comp)
        b = MapBuilder("map" if kinds == {"map"} else "graph")
        end: Dict[Port, int] = {}
        wire_other: Dict[Port, Port] = {}
        for ci, piece in enumerate(pieces):
            if isinstance(piece, VRTable):
                wire_other[(ci, 0)] = (ci, 1)
                wire_other[(ci, 1)] = (ci, 0)
                continue
            ren = b.embed(piece)
            for label, h in piece.externals:
                end[(ci, label)] = ren[h]
        link_of: Dict[Port, Port] = {}
        for a, c in self.links:
            link_of[a] = c
            link_of[c] = a
        ext_label = {p: i for i, p in enumerate(self.externals)}
        for p, h in end.items():
            if p in ext_label:
                b.export(ext_label[p], h)
                continue
            q = link_of[p]
            while q in wire_other:
                far = wire_other[q]
                if far in ext_label:
                    b.export(ext_label[far], h)
                    break
                q = link_of[far]
            else:
                if h < end[q]:
                    b.connect(h, end[q])
        m = b.build()
        if m.n_externals != len(self.externals):
            raise MapError("a wire chain joins two externals directly")
        return m


def component_labels(comp: Component) -> Tuple[int, ...]:
    if isinstance(comp, VRTable):
        return comp.labels
    if isinstance(comp, GadgetNetwork):
        return comp.labels
    if isinstance(comp, MixedMap):
        return tuple(range(comp.n_externals))
    raise TypeError(f"unsupported component {type(comp).__name__}")


def component_table(comp: Component, mode: str = GENERAL, modulus: Optional[int] = None,
                    brute_limit: int = 8) -> VRTable:
    """Resolve a component to its VR table."""
    if isinstance(comp, VRTable):
        return comp.reduce(modulus) if modulus else comp
    if isinstance(comp, GadgetNetwork):
        return compose_vr(comp, modulus=modulus)
    if isinstance(comp, MixedMap):
        if comp.n_externals == 0:
            n = count_closed(comp, mode) if comp.n_vertices <= brute_limit else \
                count_closed(comp, mode, engine="merge")
            return VRTable((), {(): n}, mode)
        if comp.n_vertices <= brute_limit:
            return count_vr(comp, mode, modulus=modulus)
        return count_vr(comp, mode, engine="merge", modulus=modulus)
    raise TypeError(f"unsupported component {type(comp).__name__}")


# ---------------------------------------------------------------------------
# composition
# ---------------------------------------------------------------------------

class _Block:
    """A partial result: ports in a fixed order and a table keyed by mates.

    A key is a tuple ``mate`` with ``mate[i]`` the local index routed to
    port ``i``; the empty key on a port-less block means "one closed tour".
    """

    __slots__ = ("ports", "table")

    def __init__(self, ports: Tuple[Hashable, ...], table: Dict[Tuple[int, ...], Number]):
        self.ports = ports
        self.table = table


def _block_from_table(ci: int, t: VRTable) -> _Block:
    ports = tuple((ci, l) for l in t.labels)
    pos = {l: i for i, l in enumerate(t.labels)}
    table = {}
    for rt, c in t.counts.items():
        if not rt:
            table[()] = c
            continue
        mate = [0] * len(ports)
        for a, b in rt:
            mate[pos[a]] = pos[b]
            mate[pos[b]] = pos[a]
        table[tuple(mate)] = c
    return _Block(ports, table)


def _merge(A: _Block, B: _Block, link_of: Dict[Hashable, Hashable], final: bool,
           modulus: Optional[int]) -> _Block:
    ports = A.ports + B.ports
    n = len(ports)
    index = {p: i for i, p in enumerate(ports)}
    link = [-1] * n
    for i, p in enumerate(ports):
        q = link_of.get(p)
        if q is not None and q in index:
            link[i] = index[q]
    remaining = [i for i in range(n) if link[i] < 0]
    newpos = {i: k for k, i in enumerate(remaining)}
    linked = [i for i in range(n) if link[i] >= 0]
    off = len(A.ports)
    b_items = [(tuple(x + off for x in mb), cb) for mb, cb in B.table.items()]
    out: Dict[Tuple[int, ...], Number] = {}
    n_rem = len(remaining)
    for ma, ca in A.table.items():
        for mb, cb in b_items:
            mate = ma + mb
            visited = bytearray(n)
            newmate = [0] * n_rem
            for r in remaining:
                if visited[r]:
                    continue
                x = r
                while True:
                    visited[x] = 1
                    y = mate[x]
                    visited[y] = 1
                    z = link[y]
                    if z < 0:
                        break
                    x = z
                newmate[newpos[r]] = newpos[y]
                newmate[newpos[y]] = newpos[r]
            cycles = 0
            for i in linked:
                if visited[i]:
                    continue
                cycles += 1
                if cycles > 1:
                    break
                x = i
                while not visited[x]:
                    visited[x] = 1
                    y = mate[x]
                    visited[y] = 1
                    x = link[y]
            if cycles:
                if not (final and n_rem == 0 and cycles == 1):
                    continue
                key = ()
            else:
                key = tuple(newmate)
            val = ca * cb
            if key in out:
                val = out[key] + val
            if modulus:
                val %= modulus
            out[key] = val
    return _Block(tuple(ports[i] for i in remaining), {k: v for k, v in out.items() if v})


def compose_vr(net: GadgetNetwork, modulus: Optional[int] = None,
               order: Optional[Sequence[int]] = None) -> VRTable:
    """VR table of a network from its components' tables.

    Equivalent to summing, over every assignment of a route type to each
    component, the product of component counts for assignments whose traced
    wiring yields routes on the network externals and no closed cycle (or
    exactly one closed tour when the network is closed).  Components are
    absorbed one at a time into a growing block, which keeps the work
    proportional to the frontier rather than to the full product.
    """
    tables = [component_table(c, net.mode, modulus) for c in net.components]
    if not tables:
        raise MapError("empty network")
    link_of: Dict[Hashable, Hashable] = {}
    for a, b in net.links:
        link_of[a] = b
        link_of[b] = a
    blocks = [_block_from_table(ci, t) for ci, t in enumerate(tables)]
    comp_of_port = {p: ci for ci, blk in enumerate(blocks) for p in blk.ports}
    if order is not None:
        order = list(order)
        if sorted(order) != list(range(len(blocks))):
            raise MapError("order must be a permutation of the components")
    # greedy: absorb the component with most links into the current block
    k_links = [0] * len(blocks)
    heap = [(0, len(blk.ports), ci) for ci, blk in enumerate(blocks)]
    heapq.heapify(heap)
    done = [False] * len(blocks)
    current = _Block((), {(): 1})
    left = len(blocks)
    nxt = order.pop(0) if order is not None else 0
    while True:
        done[nxt] = True
        left -= 1
        if current.ports == () and current.table.get(()) and left < len(blocks) - 1:
            # a finished tour with components still pending: disconnected
            return VRTable(net.labels, {}, net.mode)
        current = _merge(current, blocks[nxt], link_of, final=left == 0, modulus=modulus)
        if not current.table or left == 0:
            break
        for p in blocks[nxt].ports:
            q = link_of.get(p)
            if q is None:
                continue
            cj = comp_of_port[q]
            if not done[cj]:
                k_links[cj] += 1
                heapq.heappush(heap, (-k_links[cj], len(blocks[cj].ports) - 2 * k_links[cj], cj))
        if order is not None:
            nxt = order.pop(0)
            continue
        while True:
            negk, _, cj = heapq.heappop(heap)
            if not done[cj] and -negk == k_links[cj]:
                break
        nxt = cj
    if not current.table:
        return VRTable(net.labels, {}, net.mode)
    ext_index = {p: i for i, p in enumerate(net.externals)}
    counts: Dict[RouteType, Number] = {}
    if not net.externals:
        if current.ports:
            raise MapError("closed network left dangling ports")
        return VRTable((), dict(current.table), net.mode)
    for mate, c in current.table.items():
        if not mate:
            continue
        rt = canonical_type((ext_index[current.ports[i]], ext_index[current.ports[j]])
                            for i, j in enumerate(mate) if i < j)
        counts[rt] = counts.get(rt, 0) + c
    return VRTable(net.labels, counts, net.mode)


def compose_vr_naive(net: GadgetNetwork) -> VRTable:
    """Literal sum over all per-component type assignments (small networks only)."""
    tables = [component_table(c, net.mode) for c in net.components]
    link_of = {}
    for a, b in net.links:
        link_of[a] = b
        link_of[b] = a
    ext_index = {p: i for i, p in enumerate(net.externals)}
    items = [list(t.counts.items()) for t in tables]
    counts: Dict[RouteType, Number] = {}
    for combo in itertools.product(*items):
        mate = {}
        weight = 1
        for ci, (rt, c) in enumerate(combo):
            weight *= c
            for a, b in rt:
                mate[(ci, a)] = (ci, b)
                mate[(ci, b)] = (ci, a)
        seen = set()
        pairs = []
        for p in net.externals:
            if p in seen:
                continue
            x = p
            while True:
                seen.add(x)
                y = mate[x]
                seen.add(y)
                if y in ext_index:
                    break
                x = link_of[y]
            pairs.append((ext_index[p], ext_index[y]))
        cycles = 0
        for p in link_of:
            if p in seen:
                continue
            cycles += 1
            x = p
            while x not in seen:
                seen.add(x)
                y = mate[x]
                seen.add(y)
                x = link_of[y]
        if net.externals:
            if cycles:
                continue
            key = canonical_type(pairs)
        else:
            if cycles != 1:
                continue
            key = ()
        counts[key] = counts.get(key, 0) + weight
    return VRTable(net.labels, counts, net.mode)

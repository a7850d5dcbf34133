import random
from fractions import Fraction as F

import networkx as nx
import pytest

from eulercount import fixtures
from eulercount.graph import MapBuilder, MixedMap
from eulercount.region import INSIDE, RegionS


def map_from_networkx(G) -> MixedMap:
    """Plane map of a planar networkx graph, rotations clockwise."""
    ok, emb = nx.check_planarity(G)
    assert ok
    hid = {}
    for u, v in emb.edges():
        hid[(u, v)] = len(hid)
    nodes = sorted(G.nodes())
    verts = tuple((i, tuple(hid[(v, w)] for w in emb.neighbors_cw_order(v))) for i, v in enumerate(nodes))
    edges = tuple((hid[(u, v)], hid[(v, u)]) for u, v in G.edges())
    return MixedMap(verts, edges, (), "map")


def random_gadget(rng: random.Random, n: int, kind: str = "graph", loops: bool = False) -> MixedMap:
    """Connected 4-regular gadget with 4 externals on ``n`` vertices (random slot matching)."""
    while True:
        b = MapBuilder(kind)
        slots = [b.vertex(4) for _ in range(n)]
        flat = [h for s in slots for h in s]
        rng.shuffle(flat)
        owner = {h: v for v, s in enumerate(slots) for h in s}
        ext, rest = flat[:4], flat[4:]
        pairs = [(rest[i], rest[i + 1]) for i in range(0, len(rest), 2)]
        if not loops and any(owner[a] == owner[c] for a, c in pairs):
            continue
        for label, h in enumerate(ext):
            b.export(label, h)
        for a, c in pairs:
            b.connect(a, c)
        m = b.build()
        if m.is_connected():
            return m


@pytest.fixture
def dipole4():
    return fixtures.dipole(4)


@pytest.fixture
def dipole6():
    return fixtures.dipole(6)


@pytest.fixture
def doubled_c3():
    return fixtures.doubled_cycle(3)


@pytest.fixture
def k5():
    return fixtures.complete(5)


@pytest.fixture
def k5_plus():
    return fixtures.k5_plus()


@pytest.fixture
def kotzig_corpus():
    """Plane base maps whose medials form the 4-regular test corpus."""
    base = {name: f() for name, f in fixtures.PLANE_MAPS.items()}
    base["nx-octahedron"] = map_from_networkx(nx.octahedral_graph())
    base["nx-k24"] = map_from_networkx(nx.complete_bipartite_graph(2, 4))
    return base


def targets_up_to(q_max):
    out = set()
    for q in range(1, q_max + 1):
        for a in range(q + 1):
            for b in range(q + 1 - a):
                t = (F(a, q), F(b, q), F(q - a - b, q))
                if max(t) < 1:
                    out.add(t)
    return sorted(out)


def interior_targets(k, seed):
    rng = random.Random(seed)
    region = RegionS()
    out = []
    while len(out) < k:
        x, y = sorted((rng.random(), rng.random()))
        a, b = F(x).limit_denominator(1000), F(y - x).limit_denominator(1000)
        t = (a, b, 1 - a - b)
        if min(t) > 0 and region.classify(t) == INSIDE:
            out.append(t)
    return out

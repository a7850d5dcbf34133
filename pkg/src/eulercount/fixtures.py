"""Small named graphs and plane maps used by the CLI, demos and tests."""

from __future__ import annotations

import math
from itertools import combinations
from typing import Dict, List, Sequence, Tuple

from .graph import MapBuilder, MapError, MixedMap


def from_edges(n: int, edges: Sequence[Tuple[int, int]], kind: str = "graph") -> MixedMap:
    """Closed graph on vertices 0..n-1; half-edges are handed out in edge order."""
    b = MapBuilder(kind)
    deg = [0] * n
    for u, w in edges:
        deg[u] += 1
        deg[w] += 1
    slots = [b.vertex(d) for d in deg]
    used = [0] * n
    for u, w in edges:
        b.connect(slots[u][used[u]], slots[w][used[w]] if u != w else slots[w][used[w] + 1])
        used[u] += 1
        used[w] += 1
    return b.build()


def plane_map(coords: Sequence[Tuple[float, float]], edges: Sequence[Tuple[int, int]]) -> MixedMap:
    """Map of a straight-line drawing: rotations list neighbours clockwise."""
    n = len(coords)
    b = MapBuilder("map")
    ends: Dict[int, List[Tuple[float, int]]] = {v: [] for v in range(n)}
    pairs = []
    for u, w in edges:
        hu, hw = b.half_edges(2)
        for x, y, h in ((u, w, hu), (w, u, hw)):
            dx, dy = coords[y][0] - coords[x][0], coords[y][1] - coords[x][1]
            ends[x].append((-math.atan2(dy, dx), h))
        pairs.append((hu, hw))
    for v in range(n):
        b.vertex_with([h for _, h in sorted(ends[v])])
    for a, c in pairs:
        b.connect(a, c)
    return b.build()


def dipole(k: int) -> MixedMap:
    return from_edges(2, [(0, 1)] * k)


def doubled_cycle(n: int) -> MixedMap:
    return from_edges(n, [e for i in range(n) for e in [(i, (i + 1) % n)] * 2])


def complete(n: int) -> MixedMap:
    return from_edges(n, list(combinations(range(n), 2)))


def k5_plus() -> MixedMap:
    """Five vertices, one of degree 6: K5 minus an edge, plus doubled edges 01 and 02."""
    edges = [e for e in combinations(range(5), 2) if e != (1, 2)] + [(0, 1), (0, 2)]
    return from_edges(5, edges)


def plane_dipole4() -> MixedMap:
    """4-dipole with rotations (a,b,c,d) and (a,d,c,b)."""
    return MixedMap(((0, (0, 1, 2, 3)), (1, (4, 7, 6, 5))), ((0, 4), (1, 5), (2, 6), (3, 7)), (), "map")


def _ring(n: int, r: float = 1.0, phase: float = 0.0):
    return [(r * math.cos(phase + 2 * math.pi * i / n), r * math.sin(phase + 2 * math.pi * i / n))
            for i in range(n)]


def plane_cycle(n: int) -> MixedMap:
    if n < 3:
        raise MapError("use plane_digon for n = 2")
    return plane_map(_ring(n), [(i, (i + 1) % n) for i in range(n)])


def plane_digon() -> MixedMap:
    return MixedMap(((0, (0, 1)), (1, (2, 3))), ((0, 3), (1, 2)), (), "map")


def plane_theta() -> MixedMap:
    return MixedMap(((0, (0, 1, 2)), (1, (3, 4, 5))), ((0, 5), (1, 4), (2, 3)), (), "map")


def plane_wheel(n: int) -> MixedMap:
    """Hub 0 and rim 1..n."""
    coords = [(0.0, 0.0)] + _ring(n)
    edges = [(0, i) for i in range(1, n + 1)] + [(i, i % n + 1) for i in range(1, n + 1)]
    return plane_map(coords, edges)


def plane_k4() -> MixedMap:
    return plane_wheel(3)


def plane_prism(n: int) -> MixedMap:
    coords = _ring(n) + _ring(n, 2.0)
    edges = ([(i, (i + 1) % n) for i in range(n)] + [(n + i, n + (i + 1) % n) for i in range(n)]
             + [(i, n + i) for i in range(n)])
    return plane_map(coords, edges)


def plane_cube() -> MixedMap:
    return plane_prism(4)


def octahedron() -> MixedMap:
    """Plane octahedron, the medial of the tetrahedron."""
    from .kotzig import medial_map
    return medial_map(plane_k4())


GRAPHS = {
    "4dipole": lambda: dipole(4),
    "6dipole": lambda: dipole(6),
    "doubled-c3": lambda: doubled_cycle(3),
    "k5": lambda: complete(5),
    "k5plus": k5_plus,
}

PLANE_MAPS = {
    "digon": plane_digon,
    "theta": plane_theta,
    "c3": lambda: plane_cycle(3),
    "c4": lambda: plane_cycle(4),
    "k4": plane_k4,
    "w4": lambda: plane_wheel(4),
    "prism": lambda: plane_prism(3),
    "cube": plane_cube,
}


def named(name: str) -> MixedMap:
    """Look up a fixture: a graph name, ``plane-4dipole``, ``octahedron``,
    a plane map name, or ``medial-<plane map>``."""
    if name in GRAPHS:
        return GRAPHS[name]()
    if name == "plane-4dipole":
        return plane_dipole4()
    if name == "octahedron":
        return octahedron()
    if name in PLANE_MAPS:
        return PLANE_MAPS[name]()
    if name.startswith("medial-") and name[7:] in PLANE_MAPS:
        from .kotzig import medial_map
        return medial_map(PLANE_MAPS[name[7:]]())
    raise MapError(f"unknown fixture {name!r}")


def fixture_names():
    return (list(GRAPHS) + ["plane-4dipole", "octahedron"] + list(PLANE_MAPS)
            + [f"medial-{n}" for n in PLANE_MAPS])

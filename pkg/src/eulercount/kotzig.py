"""A-trails of 4-regular plane maps via medial inversion and the matrix-tree theorem."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

from .graph import MapBuilder, MapError, MixedMap


@dataclass
class FaceStructure:
    faces: List[Tuple[int, ...]]
    face_of: Dict[int, int]
    n_vertices: int
    n_edges: int

    @property
    def euler_characteristic(self) -> int:
        return self.n_vertices - self.n_edges + len(self.faces)

    @property
    def genus(self) -> int:
        return (2 - self.euler_characteristic) // 2


def rotation_successor(m: MixedMap) -> Dict[int, int]:
    succ = {}
    for _, rot in m.vertices:
        for i, h in enumerate(rot):
            succ[h] = rot[(i + 1) % len(rot)]
    return succ


def trace_faces(m: MixedMap, require_plane: bool = True) -> FaceStructure:
    """Faces as orbits of ``h -> succ(twin(h))``.

    The corner ``(x, succ(x))`` at a vertex belongs to the face of ``twin(x)``.
    """
    if m.kind != "map":
        raise MapError("faces need a map (kind='map')")
    if m.n_externals:
        raise MapError("faces need a closed map")
    if not m.is_connected():
        raise MapError("faces need a connected map")
    succ = rotation_successor(m)
    twin = m.twin
    face_of: Dict[int, int] = {}
    faces: List[Tuple[int, ...]] = []
    for _, rot in m.vertices:
        for h0 in rot:
            if h0 in face_of:
                continue
            orbit = []
            h = h0
            while h not in face_of:
                face_of[h] = len(faces)
                orbit.append(h)
                h = succ[twin[h]]
            faces.append(tuple(orbit))
    fs = FaceStructure(faces, face_of, m.n_vertices, m.n_edges)
    if require_plane and fs.euler_characteristic != 2:
        raise MapError(f"rotation system is not plane (genus {fs.genus})")
    return fs


def face_colouring(m: MixedMap, fs: FaceStructure) -> List[int]:
    """Two-colour faces so the two sides of every edge differ; face of the
    lowest half-edge gets colour 0 (white)."""
    adj: Dict[int, List[int]] = {i: [] for i in range(len(fs.faces))}
    for a, b in m.edges:
        fa, fb = fs.face_of[a], fs.face_of[b]
        adj[fa].append(fb)
        adj[fb].append(fa)
    colour = [-1] * len(fs.faces)
    root = fs.face_of[min(fs.face_of)]
    order = [root] + [i for i in range(len(fs.faces)) if i != root]
    for s in order:
        if colour[s] >= 0:
            continue
        colour[s] = 0
        queue = deque([s])
        while queue:
            f = queue.popleft()
            for g in adj[f]:
                if colour[g] < 0:
                    colour[g] = 1 - colour[f]
                    queue.append(g)
                elif colour[g] == colour[f]:
                    raise MapError("faces cannot be two-coloured")
    return colour


@dataclass
class PlanarDemedial:
    base: MixedMap  # one vertex per black face, one edge per map vertex
    colours: List[int]
    faces: FaceStructure
    black: int

    @property
    def n_edges(self) -> int:
        return self.base.n_edges


def checkerboard_demedialize(m: MixedMap, black: int = 1) -> PlanarDemedial:
    """Recover the plane graph whose medial is ``m``.

    Vertices are the faces of colour ``black``; each 4-valent vertex of ``m``
    touches two black corners and becomes the edge joining them.  The
    rotation at a face-vertex follows the face boundary.
    """
    degs = set(m.degrees().values())
    if degs != {4}:
        raise MapError("demedialization needs a 4-regular map")
    fs = trace_faces(m)
    colour = face_colouring(m, fs)
    twin = m.twin
    # corner (x, succ x) lies in face(twin x); black corners per vertex
    corner_half: Dict[int, int] = {}  # half-edge x opening a black corner -> G' half-edge id
    v_halves: Dict[int, List[int]] = {}
    next_id = 0
    for v, rot in m.vertices:
        hs = []
        for x in rot:
            if colour[fs.face_of[twin[x]]] == black:
                corner_half[x] = next_id
                hs.append(next_id)
                next_id += 1
        if len(hs) != 2:
            raise MapError(f"vertex {v} does not alternate colours")
        v_halves[v] = hs
    black_faces = [i for i, c in enumerate(colour) if c == black]
    fid = {f: k for k, f in enumerate(black_faces)}
    verts = []
    for f in black_faces:
        # walking the orbit h -> succ(twin h) passes the corners (twin h, succ twin h)
        rot = tuple(corner_half[twin[h]] for h in fs.faces[f])
        verts.append((fid[f], rot))
    edges = tuple(tuple(v_halves[v]) for v, _ in m.vertices)
    base = MixedMap(tuple(verts), edges, (), "map")
    return PlanarDemedial(base, colour, fs, black)


def bareiss_det(mat: List[List[int]]) -> int:
    """Exact integer determinant by fraction-free elimination."""
    a = [list(row) for row in mat]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i = a[i]
            row_k = a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
        prev = akk
    return sign * a[n - 1][n - 1]


def spanning_tree_count(n: int, edges: Sequence[Tuple[int, int]]) -> int:
    """Spanning trees of a multigraph on vertices 0..n-1 (loops ignored)."""
    if n <= 1:
        return 1
    lap = [[0] * n for _ in range(n)]
    for a, b in edges:
        if a == b:
            continue
        lap[a][a] += 1
        lap[b][b] += 1
        lap[a][b] -= 1
        lap[b][a] -= 1
    minor = [row[1:] for row in lap[1:]]
    return bareiss_det(minor)


def map_spanning_tree_count(g: MixedMap) -> int:
    index = {v: i for i, (v, _) in enumerate(g.vertices)}
    return spanning_tree_count(len(index), [(index[a], index[b]) for a, b in g.edge_multiset()])


def count_atrails_plane(m: MixedMap, black: int = 1) -> int:
    """#A-trails of a 4-regular plane map as spanning trees of its demedial."""
    return map_spanning_tree_count(checkerboard_demedialize(m, black).base)


def medial_map(g: MixedMap) -> MixedMap:
    """Medial of a connected plane map: a 4-valent vertex per edge, an edge per corner.

    Both global orientations are tried and the plane one is returned.
    """
    if g.n_externals or g.kind != "map":
        raise MapError("medial needs a closed map")
    if not g.edges:
        raise MapError("medial needs at least one edge")
    succ = rotation_successor(g)
    for flip in (False, True):
        b = MapBuilder("map")
        first: Dict[int, int] = {}   # corner (x, succ x) seen from x's edge
        second: Dict[int, int] = {}  # corner (pred x, x) seen from x's edge
        for h, t in g.edges:
            f_h, s_h, f_t, s_t = b.half_edges(4)
            first[h], second[h], first[t], second[t] = f_h, s_h, f_t, s_t
            rot = (s_h, f_t, s_t, f_h)
            b.vertex_with(rot[::-1] if flip else rot)
        for x in succ:
            b.connect(first[x], second[succ[x]])
        med = b.build()
        if trace_faces(med, require_plane=False).euler_characteristic == 2:
            return med
    raise MapError("input map is not plane")

"""Exhaustive and randomised evidence for the region S.

Gadgets here are connected 4-regular multigraphs with four external
half-edges labelled 0..3.  A gadget on ``n`` vertices is stored as
``(ext, M)``: ``ext[l]`` is the vertex carrying label ``l`` and ``M`` is
the symmetric multiplicity matrix (``M[v][v]`` counts loops at ``v``).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Tuple

import mpmath

from .counting import count_vr
from .graph import GENERAL, MapBuilder, MapError, MixedMap
from .region import BOUNDARY, INSIDE, OUTSIDE, RegionS
from .signature import Signature, glue_counts

Matrix = Tuple[Tuple[int, ...], ...]


def _ext_assignments(n: int, canonical: bool) -> Iterator[Tuple[int, ...]]:
    """Vertex of each label; restricted growth when ``canonical`` (labels meet
    vertices in order of first appearance, which loses no isomorphism class)."""
    if not canonical:
        yield from itertools.product(range(n), repeat=4)
        return

    def rec(prefix, top):
        if len(prefix) == 4:
            yield tuple(prefix)
            return
        for v in range(min(top + 1, n)):
            yield from rec(prefix + [v], max(top, v + 1))
    yield from rec([], 0)


def _matrices(resid: List[int], allow_loops: bool) -> Iterator[Matrix]:
    n = len(resid)
    M = [[0] * n for _ in range(n)]
    left = list(resid)
    cells = [(i, j) for i in range(n) for j in range(i, n)]

    def rec(k):
        if k == len(cells):
            if not any(left):
                yield tuple(tuple(r) for r in M)
            return
        i, j = cells[k]
        # once row i's last cell is passed it must be exhausted
        if i == j:
            top = left[i] // 2 if allow_loops else 0
            for x in range(top, -1, -1):
                M[i][i] = x
                left[i] -= 2 * x
                yield from rec(k + 1)
                left[i] += 2 * x
            M[i][i] = 0
            return
        top = min(left[i], left[j])
        lo = left[i] if j == n - 1 else 0  # last cell of row i takes the remainder
        if lo > top:
            return
        for x in range(lo, top + 1):
            M[i][j] = M[j][i] = x
            left[i] -= x
            left[j] -= x
            yield from rec(k + 1)
            left[i] += x
            left[j] += x
        M[i][j] = M[j][i] = 0

    if n == 1:
        # only the loop cell
        if allow_loops and resid[0] % 2 == 0:
            yield ((resid[0] // 2,),)
        elif resid[0] == 0:
            yield ((0,),)
        return
    yield from rec(0)


def _connected(M: Matrix) -> bool:
    n = len(M)
    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for u in range(n):
            if M[v][u] and u not in seen:
                seen.add(u)
                stack.append(u)
    return len(seen) == n


def certificate(ext: Tuple[int, ...], M: Matrix) -> Tuple:
    """Lexicographically least relabelling of the vertices (labels stay fixed)."""
    n = len(M)
    best = None
    for perm in itertools.permutations(range(n)):
        inv = [0] * n
        for old, new in enumerate(perm):
            inv[new] = old
        key = (tuple(perm[v] for v in ext),
               tuple(M[inv[i]][inv[j]] for i in range(n) for j in range(i, n)))
        if best is None or key < best:
            best = key
    return best


def gadget_from(ext: Tuple[int, ...], M: Matrix) -> MixedMap:
    n = len(M)
    b = MapBuilder("graph")
    slots = [b.vertex(4) for _ in range(n)]
    free = [list(s) for s in slots]
    for label, v in enumerate(ext):
        b.export(label, free[v].pop(0))
    for i in range(n):
        for j in range(i, n):
            for _ in range(M[i][j]):
                b.connect(free[i].pop(0), free[j].pop(0))
    return b.build()


@dataclass(frozen=True)
class GadgetSpec:
    ext: Tuple[int, ...]
    M: Matrix

    @property
    def n(self) -> int:
        return len(self.M)

    def build(self) -> MixedMap:
        return gadget_from(self.ext, self.M)


def enumerate_specs(n: int, allow_loops: bool = False, dedup: bool = True,
                    exact_size: bool = False) -> Iterator[GadgetSpec]:
    if n < 1:
        raise MapError("n must be at least 1")
    sizes = [n] if exact_size else range(1, n + 1)
    for k in sizes:
        seen = set()
        for ext in _ext_assignments(k, dedup):
            resid = [4] * k
            for v in ext:
                resid[v] -= 1
            if any(r < 0 for r in resid):
                continue
            for M in _matrices(resid, allow_loops):
                if not _connected(M):
                    continue
                if dedup:
                    cert = certificate(ext, M)
                    if cert in seen:
                        continue
                    seen.add(cert)
                yield GadgetSpec(ext, M)


def enumerate_gadgets(n: int, allow_loops: bool = False, dedup: bool = True) -> Iterator[MixedMap]:
    """Connected 4-regular graph gadgets on at most ``n`` vertices.

    With ``dedup`` off every vertex-labelled gadget is produced.
    """
    for gs in enumerate_specs(n, allow_loops, dedup):
        yield gs.build()


# ---------------------------------------------------------------------------
# region scan
# ---------------------------------------------------------------------------

@dataclass
class ScanReport:
    n: int
    allow_loops: bool
    dedup: bool
    gadgets: int = 0
    by_size: Dict[int, int] = field(default_factory=dict)
    classes: Dict[str, int] = field(default_factory=lambda: {INSIDE: 0, BOUNDARY: 0, OUTSIDE: 0})
    min_margin: Optional[float] = None
    min_margin_signature: Optional[Signature] = None
    outside: List[dict] = field(default_factory=list)
    rows: List[dict] = field(default_factory=list)

    @property
    def n_outside(self) -> int:
        return self.classes[OUTSIDE]

    def to_dict(self) -> dict:
        return {"n": self.n, "loops": self.allow_loops, "dedup": self.dedup, "gadgets": self.gadgets,
                "by_size": {str(k): v for k, v in sorted(self.by_size.items())},
                "classes": dict(self.classes), "min_margin": self.min_margin,
                "min_margin_signature": (self.min_margin_signature.to_dict()
                                         if self.min_margin_signature else None),
                "outside": self.outside}


def region_scan(n: int, allow_loops: bool = False, dedup: bool = True,
                region: Optional[RegionS] = None, keep_rows: bool = False) -> ScanReport:
    """Signature and class of every enumerated gadget."""
    region = region or RegionS()
    rep = ScanReport(n, allow_loops, dedup)
    memo: Dict[Tuple, Tuple[str, float]] = {}
    for gs in enumerate_specs(n, allow_loops, dedup):
        sig = Signature.from_counts(count_vr(gs.build(), GENERAL).triple())
        rep.gadgets += 1
        rep.by_size[gs.n] = rep.by_size.get(gs.n, 0) + 1
        key = sig.as_tuple()
        if key not in memo:
            memo[key] = (region.classify(key), float(region.margin(key)))
        cls, margin = memo[key]
        rep.classes[cls] += 1
        if rep.min_margin is None or margin < rep.min_margin:
            rep.min_margin, rep.min_margin_signature = margin, sig
        if cls == OUTSIDE:
            rep.outside.append({"ext": list(gs.ext), "matrix": [list(r) for r in gs.M],
                                "signature": sig.to_dict()})
        if keep_rows:
            a, b, c = sig.as_tuple()
            rep.rows.append({"alpha": a, "beta": b, "gamma": c, "class": cls, "vertices": gs.n})
    return rep


# ---------------------------------------------------------------------------
# closure sampling
# ---------------------------------------------------------------------------

@dataclass
class ClosureReport:
    trials: int
    seed: int
    boundary_share: float
    classes: Dict[str, int] = field(default_factory=lambda: {INSIDE: 0, BOUNDARY: 0, OUTSIDE: 0})
    min_margin: Optional[float] = None
    counterexamples: List[dict] = field(default_factory=list)

    @property
    def n_outside(self) -> int:
        return self.classes[OUTSIDE]

    def to_dict(self) -> dict:
        return {"trials": self.trials, "seed": self.seed, "boundary_share": self.boundary_share,
                "classes": dict(self.classes), "min_margin": self.min_margin,
                "counterexamples": self.counterexamples}


def _sample_point(rng: random.Random, region: RegionS, w, boundary_share: float):
    if rng.random() < boundary_share:
        pt = list(region.boundary_point(mpmath.mpf(rng.random()) * w))
    else:
        while True:  # uniform on the simplex, rejected outside S
            x, y = sorted((rng.random(), rng.random()))
            pt = [mpmath.mpf(x), mpmath.mpf(y - x), mpmath.mpf(1 - y)]
            if region.classify(pt) != OUTSIDE:
                break
    rng.shuffle(pt)  # S is symmetric; the glue is not
    return pt


def closure_sample(trials: int, seed: int = 0, boundary_share: float = 0.25,
                   region: Optional[RegionS] = None) -> ClosureReport:
    """Glue random pairs of points of S and classify the results."""
    if trials < 1:
        raise MapError("trials must be at least 1")
    region = region or RegionS()
    rng = random.Random(seed)
    rep = ClosureReport(trials, seed, boundary_share)
    with mpmath.workprec(region.prec):
        w = region.w()
        for _ in range(trials):
            s1 = _sample_point(rng, region, w, boundary_share)
            s2 = _sample_point(rng, region, w, boundary_share)
            g = glue_counts(s1, s2)
            total = sum(g)
            if total == 0:
                continue
            s3 = [x / total for x in g]
            cls = region.classify(s3)
            margin = float(region.margin(s3))
            rep.classes[cls] += 1
            if rep.min_margin is None or margin < rep.min_margin:
                rep.min_margin = margin
            if cls == OUTSIDE:
                rep.counterexamples.append({"s1": [float(x) for x in s1], "s2": [float(x) for x in s2],
                                            "glue": [float(x) for x in s3], "margin": margin})
    return rep


def scan_rows(rep: ScanReport) -> List[dict]:
    return [{"alpha": str(r["alpha"]), "beta": str(r["beta"]), "gamma": str(r["gamma"]),
             "class": r["class"]} for r in rep.rows]


"""The even/odd adjacent-transposition sweep on d cards.

Layer ``t`` (1-based) considers lane pairs (0,1),(2,3),.. when ``t`` is odd
and (1,2),(3,4),.. when even, swapping each pair independently with
probability 1/2.  A permutation ``sigma`` records where each card ended:
``sigma[i]`` is the final lane of the card that started in lane ``i``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

import numpy as np

from .graph import MapError

EXACT_MAX_D = 6
DEFAULT_D_CAP = 8

Perm = Tuple[int, ...]


def layer_pairs(d: int, t: int) -> List[Tuple[int, int]]:
    start = 0 if t % 2 else 1
    return [(a, a + 1) for a in range(start, d - 1, 2)]


@lru_cache(maxsize=None)
def _perm_space(d: int):
    perms = list(itertools.permutations(range(d)))
    index = {p: i for i, p in enumerate(perms)}
    swaps = {}
    for a in range(d - 1):
        swap = {a: a + 1, a + 1: a}
        swaps[a] = np.array([index[tuple(swap.get(x, x) for x in p)] for p in perms], dtype=np.intp)
    return perms, index, swaps


class _Walker:
    """Holds the current (unnormalised) vector and advances it layer by layer."""

    def __init__(self, d: int, exact: bool, start: str = "identity"):
        self.d = d
        self.exact = exact
        self.perms, index, self.swaps = _perm_space(d)
        n = len(self.perms)
        if exact:
            vec = np.zeros(n, dtype=object)
            vec[:] = 0
        else:
            vec = np.zeros(n, dtype=np.float64)
        if start == "identity":
            vec[index[tuple(range(d))]] = 1
        elif start == "uniform":
            vec[:] = 1 if exact else 1.0 / n
        else:
            raise MapError(f"unknown start {start!r}")
        self.vec = vec
        self.scale = n if (exact and start == "uniform") else 1  # total mass of vec
        self.t = 0

    def step(self):
        self.t += 1
        for a, _ in layer_pairs(self.d, self.t):
            moved = self.vec[self.swaps[a]]
            if self.exact:
                self.vec = self.vec + moved
                self.scale *= 2
            else:
                self.vec = 0.5 * (self.vec + moved)

    def distribution(self) -> "PermDistribution":
        if self.exact:
            probs = {self.perms[i]: Fraction(int(c), self.scale) for i, c in enumerate(self.vec) if c}
            counts = {self.perms[i]: int(c) for i, c in enumerate(self.vec) if c}
        else:
            probs = {self.perms[i]: float(c) for i, c in enumerate(self.vec) if c > 0}
            counts = None
        return PermDistribution(self.d, self.t, probs, self.exact, counts)

    def tv(self):
        n = len(self.perms)
        if self.exact:
            # 1/2 * sum |c/scale - 1/n| = sum |n c - scale| / (2 n scale)
            s = sum(abs(n * int(c) - self.scale) for c in self.vec)
            return Fraction(s, 2 * n * self.scale)
        return 0.5 * float(np.abs(self.vec - 1.0 / n).sum())


@dataclass
class PermDistribution:
    d: int
    T: int
    probs: Dict[Perm, object]
    exact: bool
    counts: Optional[Dict[Perm, int]] = None  # route counts before normalising

    def total(self):
        return sum(self.probs.values())

    def __getitem__(self, perm) -> object:
        return self.probs.get(tuple(perm), 0)


def _check_d(d: int, cap: int):
    if not isinstance(d, int) or d < 1:
        raise MapError(f"d must be a positive integer, got {d}")
    if d > cap:
        raise MapError(f"d={d} exceeds the cap {cap}")


def chain_distribution(d: int, T: int, exact: Optional[bool] = None, start: str = "identity",
                       cap: int = DEFAULT_D_CAP) -> PermDistribution:
    """Law of the sweep after ``T`` layers (exact rationals for d <= 6 by default)."""
    _check_d(d, cap)
    if T < 0:
        raise MapError("T must be non-negative")
    w = _Walker(d, d <= EXACT_MAX_D if exact is None else exact, start)
    for _ in range(T):
        w.step()
    return w.distribution()


def tv_to_uniform(dist: PermDistribution):
    n = math.factorial(dist.d)
    if dist.exact:
        u = Fraction(1, n)
    else:
        u = 1.0 / n
    s = sum(abs(p - u) for p in dist.probs.values())
    s += (n - len(dist.probs)) * u
    return s / 2


def layer_formula(d: int, eps: float, C: float) -> int:
    """T = ceil(C d^2 ln d ln(d!/eps)), at least one layer."""
    if d < 2:
        return 1
    x = C * d * d * math.log(d) * math.log(math.factorial(d) / eps)
    return max(1, math.ceil(x))


def minimal_layers(d: int, eps: float, max_T: int = 10_000, exact: Optional[bool] = None) -> int:
    """Smallest T with TV(T) <= eps/d!, by scanning T upward."""
    _check_d(d, DEFAULT_D_CAP)
    w = _Walker(d, d <= EXACT_MAX_D if exact is None else exact)
    bound = _bound(d, eps, w.exact)
    slack = 0 if w.exact else 1e-12
    while w.tv() > bound + slack:
        if w.t >= max_T:
            raise MapError(f"no T <= {max_T} reaches the bound")
        w.step()
    return w.t


def _bound(d: int, eps: float, exact: bool):
    if exact:
        return Fraction(eps) / math.factorial(d)
    return eps / math.factorial(d)


@dataclass
class MixingReport:
    d: int
    eps: float
    C: float
    T: int
    tv: str  # exact fraction string when exact, else repr of the float
    tv_float: float
    bound: float
    within_bound: bool
    minimal_T: int

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "MixingReport":
        return cls(**data)


def mixing_report(d: int, eps: float, C: float) -> MixingReport:
    if not 0 < eps < 1:
        raise MapError("eps must lie in (0, 1)")
    if not C > 0:
        raise MapError("C must be positive")
    T = layer_formula(d, eps, C)
    dist = chain_distribution(d, T)
    tv = tv_to_uniform(dist)
    bound = _bound(d, eps, dist.exact)
    ok = tv <= bound if dist.exact else tv <= bound + 1e-12
    return MixingReport(d, eps, C, T, str(tv), float(tv), float(bound), bool(ok),
                        minimal_layers(d, eps))


CALIBRATION_DS = (3, 4, 5, 6)
CALIBRATION_EPS = (0.5, 0.1, 1e-2, 1e-3, 1e-4)


def calibrate(ds=CALIBRATION_DS, eps_grid=CALIBRATION_EPS) -> Tuple[float, List[dict]]:
    """Smallest C for which the layer formula meets the TV bound on the grid."""
    rows = []
    C = 0.0
    for d in ds:
        for eps in eps_grid:
            t_min = minimal_layers(d, eps)
            scale = d * d * math.log(d) * math.log(math.factorial(d) / eps)
            ratio = t_min / scale
            rows.append({"d": d, "eps": eps, "minimal_T": t_min, "ratio": ratio})
            C = max(C, ratio)
    return C, rows


def gadget_chain_check(d: int, T: int, budget: int = 24) -> bool:
    """Normalised a-trail route counts of the sweep gadget equal the chain law."""
    from .counting import count_vr
    from .gadgets import build_shuffle_gadget
    from .graph import ATRAIL
    if d * T > budget:
        raise MapError(f"d*T = {d * T} exceeds the budget {budget}")
    table = count_vr(build_shuffle_gadget(d, T), ATRAIL)
    total = table.total()
    dist = chain_distribution(d, T, exact=True)
    got = {}
    for rt, c in table.counts.items():
        sigma = [0] * d
        for a, b in rt:
            if not (a < d <= b):
                return False
            sigma[a] = b - d
        got[tuple(sigma)] = Fraction(c, total)
    return got == dist.probs

"""Building gadgets with a prescribed signature.

A synthesis is a small stack program over the single-vertex gadgets:

* ``base NAME``    push a fresh SMG or SGG
* ``relabel P``    relabel the top (old label ``l`` becomes ``P[l]``)
* ``glue``         pop ``g2``, pop ``g1``, push the 2-glue of ``g1`` and ``g2``
* ``call NAME``    push a fresh copy of a named sub-program

The same program is replayed three ways: on exact integer route counts,
on normalised signatures, and on a map builder that assembles the gadget.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .gadgets import glue_handles, place, relabel_handle, sgg, smg
from .graph import MapBuilder, MapError, MixedMap
from .region import OUTSIDE, RegionS
from .signature import (SWAP_AB, SWAP_AC, SWAP_BC, Signature, glue_counts, label_perm_for,
                        permute_triple)

BASES = {"SMG": ((1, 1, 0), smg, "map"), "SGG": ((1, 1, 1), sgg, "graph")}


@dataclass
class Step:
    op: str
    arg: object = None

    def to_list(self) -> list:
        if self.op == "relabel":
            return [self.op, list(self.arg)]
        return [self.op] if self.arg is None else [self.op, self.arg]


@dataclass
class SynthesisTrace:
    steps: List[Step] = field(default_factory=list)
    subs: Dict[str, "SynthesisTrace"] = field(default_factory=dict)
    info: dict = field(default_factory=dict)

    # -- construction helpers ------------------------------------------------
    def base(self, name: str) -> "SynthesisTrace":
        self.steps.append(Step("base", name))
        return self

    def relabel(self, perm: Sequence[int]) -> "SynthesisTrace":
        if tuple(perm) != (0, 1, 2, 3):
            self.steps.append(Step("relabel", tuple(perm)))
        return self

    def glue(self) -> "SynthesisTrace":
        self.steps.append(Step("glue"))
        return self

    def call(self, name: str) -> "SynthesisTrace":
        if name not in self.subs:
            raise MapError(f"unknown sub-program {name!r}")
        self.steps.append(Step("call", name))
        return self

    def extend(self, other: "SynthesisTrace") -> "SynthesisTrace":
        self.steps.extend(other.steps)
        for k, v in other.subs.items():
            if k in self.subs and self.subs[k] is not v and self.subs[k].to_dict() != v.to_dict():
                raise MapError(f"conflicting sub-program {k!r}")
            self.subs.setdefault(k, v)
        return self

    # -- replay ---------------------------------------------------------------
    def _run(self, push_base, relabel, glue, call):
        stack = []
        for st in self.steps:
            if st.op == "base":
                stack.append(push_base(st.arg))
            elif st.op == "relabel":
                stack.append(relabel(stack.pop(), st.arg))
            elif st.op == "glue":
                g2 = stack.pop()
                g1 = stack.pop()
                stack.append(glue(g1, g2))
            elif st.op == "call":
                stack.append(call(st.arg))
            else:
                raise MapError(f"unknown step {st.op!r}")
        if len(stack) != 1:
            raise MapError(f"program leaves {len(stack)} gadgets on the stack")
        return stack[0]

    def replay_counts(self) -> Tuple[int, int, int]:
        """Exact VR triple of the gadget the program builds."""
        memo: Dict[str, Tuple[int, int, int]] = {}

        def call(name):
            if name not in memo:
                memo[name] = self.subs[name].replay_counts()
            return memo[name]
        return self._run(lambda n: BASES[n][0], permute_triple, glue_counts, call)

    def replay_signature(self) -> Signature:
        return Signature.from_counts(self.replay_counts())

    def running_signatures(self) -> List[Optional[Signature]]:
        """Signature of the top of the stack after each step."""
        out = []
        memo: Dict[str, Tuple[int, int, int]] = {}
        stack = []
        for st in self.steps:
            if st.op == "base":
                stack.append(BASES[st.arg][0])
            elif st.op == "relabel":
                stack.append(permute_triple(stack.pop(), st.arg))
            elif st.op == "glue":
                g2 = stack.pop()
                stack.append(glue_counts(stack.pop(), g2))
            else:
                if st.arg not in memo:
                    memo[st.arg] = self.subs[st.arg].replay_counts()
                stack.append(memo[st.arg])
            out.append(Signature.from_counts(stack[-1]))
        return out

    def n_vertices(self) -> int:
        memo: Dict[str, int] = {}

        def size(tr: "SynthesisTrace") -> int:
            n = 0
            for st in tr.steps:
                if st.op == "base":
                    n += 1
                elif st.op == "call":
                    if st.arg not in memo:
                        memo[st.arg] = size(tr.subs[st.arg])
                    n += memo[st.arg]
            return n
        return size(self)

    def kind(self) -> str:
        kinds = {BASES[st.arg][2] for st in self.steps if st.op == "base"}
        kinds |= {sub.kind() for sub in self.subs.values()}
        return "map" if kinds == {"map"} else "graph"

    def build(self, size_cap: Optional[int] = None) -> MixedMap:
        n = self.n_vertices()
        if size_cap is not None and n > size_cap:
            raise MapError(f"gadget would have {n} vertices, above the cap {size_cap}")
        b = MapBuilder(self.kind())
        cache: Dict[str, MixedMap] = {}
        bases = {name: fn() for name, (_, fn, _) in BASES.items()}

        def call(name):
            if name not in cache:
                cache[name] = self.subs[name].build()
            return place(b, cache[name])

        h = self._run(lambda n_: place(b, bases[n_]), relabel_handle,
                      lambda g1, g2: glue_handles(b, g1, g2), call)
        for label, e in enumerate(h.ends):
            b.export(label, e)
        return b.build()

    def to_dict(self) -> dict:
        info = {k: (str(v) if isinstance(v, Fraction) else v) for k, v in self.info.items()}
        return {"steps": [s.to_list() for s in self.steps],
                "subs": {k: v.to_dict() for k, v in self.subs.items()}, "info": info}


# ---------------------------------------------------------------------------
# map gadgets
# ---------------------------------------------------------------------------

def _as_fraction_triple(target) -> Tuple[Fraction, Fraction, Fraction]:
    vals = tuple(Fraction(x) if not isinstance(x, float) else Fraction(x).limit_denominator(10 ** 12)
                 for x in target)
    if len(vals) != 3 or any(v < 0 for v in vals) or sum(vals) != 1:
        raise MapError("target must be three non-negative entries summing to 1")
    return vals


def ratio_program(q: Fraction) -> SynthesisTrace:
    """Map program with triple proportional to (q, 0, 1)."""
    if q <= 0:
        raise MapError("ratio must be positive")
    s, t = q.numerator, q.denominator
    one = SynthesisTrace().base("SMG").relabel(SWAP_BC)  # (1, 0, 1)
    inv = SynthesisTrace().extend(one)
    for _ in range(t - 1):  # (t, 0, 1)
        inv.extend(one).glue()
    if t > 1:
        inv.relabel(SWAP_AC)  # (1, 0, t)
    prog = SynthesisTrace()
    if s == 1:
        return prog.extend(inv)
    name = f"inv{t}"  # (1, 0, t) depends only on t
    prog.subs[name] = inv
    prog.call(name)
    for _ in range(s - 1):  # adding ratios
        prog.call(name).glue()
    return prog


def synthesize_map_gadget(target, build: bool = True):
    """Map gadget with exactly the rational signature ``target``.

    Returns ``(gadget, trace)``; ``gadget`` is None when ``build`` is False.
    """
    a, b, c = vals = _as_fraction_triple(target)
    if max(vals) >= 1:
        raise MapError("every entry must be below 1")
    if vals == (Fraction(1, 2), Fraction(1, 2), 0):
        tr = SynthesisTrace().base("SMG")
    elif 0 in vals:
        z = vals.index(0)
        i, j = [k for k in range(3) if k != z]
        tr = ratio_program(vals[i] / vals[j])  # (x, 0, y) on types 0 and 2
        tr.relabel(label_perm_for((i, z, j)))
    else:
        g1 = ratio_program(b / c).relabel(SWAP_AB)  # (0, b, c)
        g2 = ratio_program(a / (1 - a))             # (a, 0, 1 - a)
        tr = SynthesisTrace().extend(g1).extend(g2).glue()
    tr.info["target"] = [str(v) for v in vals]
    sig = tr.replay_signature()
    if sig.as_tuple() != vals:
        raise AssertionError(f"replay gave {sig}, wanted {vals}")
    return (tr.build() if build else None), tr


# ---------------------------------------------------------------------------
# graph gadgets
# ---------------------------------------------------------------------------

def t1(q):
    return (1 + q) / (1 + 3 * q)


def t2(q):
    return q / (1 + q)


def ratio_search(lo: float, hi: float, max_steps: int = 1_000_000) -> List[str]:
    """Forward sequence of ``t1``/``t2`` taking 1 into [lo, hi].

    Works backwards: ``t1`` maps (0,1] onto [1/2,1) and ``t2`` onto (0,1/2],
    so each interval has a unique preimage branch until it covers 1.
    """
    if hi < lo:
        raise MapError("empty ratio interval")
    lo, hi = max(lo, 0.0), min(hi, 1.0)
    if lo > 1.0:
        raise MapError("ratios above 1 are unreachable")
    back: List[str] = []
    while not (lo <= 1.0 <= hi):
        if len(back) >= max_steps:
            raise MapError("ratio search did not converge")
        if hi <= 0.5:
            lo, hi = lo / (1 - lo), hi / (1 - hi)
            back.append("t2")
        elif lo >= 0.5:
            lo, hi = (1 - hi) / (3 * hi - 1), (1 - lo) / (3 * lo - 1)
            back.append("t1")
        else:  # straddles 1/2, whose t1-preimage is 1
            back.append("t1")
            break
    return back[::-1]


def sgg_ratio_program(ops: Sequence[str]) -> SynthesisTrace:
    """Graph program with triple proportional to (q, q, 1), q from applying ``ops`` to 1."""
    tr = SynthesisTrace().base("SGG")
    for op in ops:
        if op == "t1":
            tr.base("SGG").glue().relabel(SWAP_AC)
        else:
            tr.relabel(SWAP_AC).base("SGG").glue().relabel(SWAP_AC)
    return tr


def _fc(c: float, x: float) -> float:
    return -0.5 * (x - 1) * (1 + (2 * c - 1) * math.exp(2 * x / (x - 1)))


def _bisect(fn, lo: float, hi: float, iters: int = 200) -> float:
    flo = fn(lo)
    for _ in range(iters):
        mid = (lo + hi) / 2
        if (fn(mid) > 0) == (flo > 0):
            lo, flo = mid, fn(mid)
        else:
            hi = mid
    return (lo + hi) / 2


def _alpha(counts) -> Fraction:
    return Fraction(counts[0], sum(counts))


DELTA_DIVISOR = 2  # initial delta = eps / DELTA_DIVISOR, halved until the target is met


def synthesize_graph_gadget(target, eps: float, build: bool = True, size_cap: int = 250_000,
                            region: Optional[RegionS] = None, max_halvings: int = 12):
    """Graph gadget whose signature is within ``eps`` (L1) of ``target`` in S.

    The gadget is a 2-glue chain: a start gadget (a0, a0, 1 - 2 a0) followed
    by copies of a (d/2, 1 - d, d/2) gadget, stopped once the first entry
    reaches the target's middle entry.  Distances are checked on the exact
    replayed counts.
    """
    vals = _as_fraction_triple(target)
    region = region or RegionS()
    cls = region.classify(vals)
    if cls == OUTSIDE:
        raise MapError("target lies outside S")
    if eps <= 0:
        raise MapError("eps must be positive")
    if vals == (Fraction(1, 3),) * 3:
        tr = SynthesisTrace().base("SGG")
        tr.info.update(distance="0", n_vertices=1)
        return (tr.build() if build else None), tr
    # positions of the largest, middle and smallest entries
    order = sorted(range(3), key=lambda i: (-vals[i], i))
    i3, i1, i2 = order
    s1, s2 = vals[i1], vals[i2]
    x1, x2 = float(s1), float(s2)
    E = math.exp(2 * x1 / (x1 - 1))
    c_star = min(max(0.5 * (1 + (2 * x2 / (1 - x1) - 1) / E), 0.0), 0.5)
    alpha = _bisect(lambda x: _fc(c_star, x) - x, 0.0, 1.0 / 3) if c_star > 0 else 0.0
    # built chain reads (middle, smallest, largest); send type k to order[(1,2,0)[k]]
    final_perm = label_perm_for((i1, i2, i3))

    def r_of(a):
        return a / (1 - 2 * a)

    best = None
    delta = eps / DELTA_DIVISOR
    for _ in range(max_halvings + 1):
        start = sgg_ratio_program(ratio_search(r_of(alpha), r_of(min(alpha + delta, 0.49))))
        x = delta / 2
        step_prog = sgg_ratio_program(ratio_search(0.9 * r_of(x), 1.1 * r_of(x))).relabel(SWAP_BC)
        c0 = start.replay_counts()
        cg = step_prog.replay_counts()
        cur, prev, t = c0, None, 0
        n_start, n_step = start.n_vertices(), step_prog.n_vertices()
        capped = False
        while _alpha(cur) < s1:
            prev, cur = cur, glue_counts(cur, cg)
            t += 1
            if n_start + t * n_step > size_cap * 4:
                capped = True
                break
        cands = [(t, cur)] + ([(t - 1, prev)] if prev is not None else [])
        for tt, cc in cands:
            sig = Signature.from_counts(permute_triple(cc, final_perm))
            dist = sig.l1(vals)
            if best is None or dist < best[0]:
                best = (dist, tt, delta, start, step_prog, sig)
        if best[0] <= eps:
            break
        if capped:  # a smaller delta only makes the chain longer
            raise MapError(f"eps={eps} needs a gadget beyond the size cap {size_cap} "
                           f"(best {float(best[0]):.3g})")
        delta /= 2
    dist, t, delta, start, step_prog, sig = best
    if dist > eps:
        raise MapError(f"could not reach eps={eps} (best {float(dist):.3g})")
    tr = SynthesisTrace().extend(start)
    tr.subs["step"] = step_prog
    for _ in range(t):
        tr.call("step").glue()
    tr.relabel(final_perm)
    tr.info.update(c_star=c_star, alpha=alpha, delta=delta, glues=t, distance=float(dist),
                   n_vertices=tr.n_vertices(), signature=[str(v) for v in sig.as_tuple()],
                   region=cls)
    gadget = tr.build(size_cap) if build else None
    return gadget, tr

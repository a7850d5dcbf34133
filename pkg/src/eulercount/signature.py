"""Signatures of four-terminal gadgets and the 2-glue algebra."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Sequence, Tuple, Union

from .counting import VRTable, count_vr
from .gadgets import glue_build  # noqa: F401  (re-exported)
from .graph import ATRAIL, FOUR_TYPES, GENERAL, MapError, MixedMap, canonical_type


@dataclass(frozen=True)
class Signature:
    alpha: Fraction
    beta: Fraction
    gamma: Fraction

    def __post_init__(self):
        vals = [Fraction(v) for v in (self.alpha, self.beta, self.gamma)]
        for name, v in zip(("alpha", "beta", "gamma"), vals):
            object.__setattr__(self, name, v)
            if v < 0:
                raise MapError(f"signature entry {name} is negative")
        if sum(vals) != 1:
            raise MapError("signature entries must sum to 1")

    @classmethod
    def from_counts(cls, counts: Sequence[int]) -> "Signature":
        total = sum(counts)
        if not total:
            raise MapError("no valid route set: signature undefined")
        return cls(*(Fraction(c, total) for c in counts))

    @classmethod
    def parse(cls, items: Sequence[str]) -> "Signature":
        return cls(*(Fraction(x) for x in items))

    def as_tuple(self) -> Tuple[Fraction, Fraction, Fraction]:
        return (self.alpha, self.beta, self.gamma)

    def floats(self) -> Tuple[float, float, float]:
        return tuple(float(x) for x in self.as_tuple())

    def l1(self, other) -> Fraction:
        other = other.as_tuple() if isinstance(other, Signature) else other
        return sum(abs(a - b) for a, b in zip(self.as_tuple(), other))

    def to_dict(self) -> dict:
        a, b, c = self.as_tuple()
        return {"alpha": str(a), "beta": str(b), "gamma": str(c),
                "alpha_float": float(a), "beta_float": float(b), "gamma_float": float(c)}

    def __iter__(self):
        return iter(self.as_tuple())


SMG_SIGNATURE = Signature(Fraction(1, 2), Fraction(1, 2), 0)
SGG_SIGNATURE = Signature(Fraction(1, 3), Fraction(1, 3), Fraction(1, 3))


def signature_of(x: Union[MixedMap, VRTable]) -> Signature:
    """Normalised triple over (01|23, 02|13, 03|12); maps are counted in a-trail mode."""
    if isinstance(x, MixedMap):
        if x.n_externals != 4:
            raise MapError("signature needs exactly four externals")
        mode = ATRAIL if x.kind == "map" else GENERAL
        engine = "brute" if x.n_vertices <= 10 else "merge"
        x = count_vr(x, mode, engine=engine)
    return Signature.from_counts(x.triple())


def glue_counts(t1: Sequence, t2: Sequence) -> Tuple:
    """VR triple of a 2-glue from the two parts' triples (any numeric type).

    Normalised inputs give outputs that sum to ``1 - a1*a2``.
    """
    a1, b1, c1 = t1
    a2, b2, c2 = t2
    return (a1 * (b2 + c2) + (b1 + c1) * a2, b1 * c2 + c1 * b2, b1 * b2 + c1 * c2)


def glue_triple(s1: Sequence, s2: Sequence) -> Tuple:
    a, b, c = glue_counts(s1, s2)
    den = a + b + c
    if den == 0:
        raise MapError("degenerate glue: both gadgets have signature (1,0,0)")
    return (a / den, b / den, c / den)


def glue_signature(s1, s2) -> Signature:
    s1 = s1 if isinstance(s1, Signature) else Signature(*s1)
    s2 = s2 if isinstance(s2, Signature) else Signature(*s2)
    return Signature(*glue_triple(s1.as_tuple(), s2.as_tuple()))


# ---------------------------------------------------------------------------
# relabelings
# ---------------------------------------------------------------------------

def type_action(perm: Sequence[int]) -> Tuple[int, int, int]:
    """Where each of the three pairing types goes when label ``l`` becomes ``perm[l]``."""
    index = {t: i for i, t in enumerate(FOUR_TYPES)}
    return tuple(index[canonical_type((perm[a], perm[b]) for a, b in t)] for t in FOUR_TYPES)


def permute_triple(t: Sequence, perm: Sequence[int]) -> Tuple:
    act = type_action(perm)
    out = [None] * 3
    for i, j in enumerate(act):
        out[j] = t[i]
    return tuple(out)


def relabel_signature(s: Signature, perm: Sequence[int]) -> Signature:
    return Signature(*permute_triple(s.as_tuple(), perm))


# one label permutation (fixing label 0) per permutation of the types
_LABEL_PERM_FOR: Dict[Tuple[int, int, int], Tuple[int, ...]] = {}
for _p in itertools.permutations((1, 2, 3)):
    _perm = (0,) + _p
    _LABEL_PERM_FOR[type_action(_perm)] = _perm

SWAP_AB = _LABEL_PERM_FOR[(1, 0, 2)]
SWAP_BC = _LABEL_PERM_FOR[(0, 2, 1)]
SWAP_AC = _LABEL_PERM_FOR[(2, 1, 0)]


def label_perm_for(action: Sequence[int]) -> Tuple[int, ...]:
    """Label permutation sending type ``i`` to position ``action[i]``."""
    return _LABEL_PERM_FOR[tuple(action)]

import itertools
import math
import random
from fractions import Fraction as F

from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from eulercount.chain import chain_distribution
from eulercount.counting import GadgetNetwork, compose_vr, count_vr
from eulercount.gadgets import glue_build
from eulercount.graph import ATRAIL, GENERAL, MixedMap, relabel, trace, transition_systems
from eulercount.kotzig import bareiss_det
from eulercount.reductions import DegreeProfile, select_primes, unscale_and_crt
from eulercount.region import RegionS
from eulercount.signature import glue_counts, glue_signature, relabel_signature, signature_of
from eulercount.synthesis import synthesize_map_gadget

from conftest import random_gadget

SETTINGS = settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])

seeds = st.integers(min_value=0, max_value=10 ** 9)


@SETTINGS
@given(seeds, st.integers(1, 3), st.sampled_from(["graph", "map"]), st.booleans())
def test_bipartition_compose_equals_brute(seed, n, kind, loops):
    rng = random.Random(seed)
    m = random_gadget(rng, n, kind, loops)
    mode = ATRAIL if kind == "map" else GENERAL
    vs = [v for v, _ in m.vertices]
    cut = rng.randint(0, len(vs))
    parts = [p for p in (vs[:cut], vs[cut:]) if p]
    net = GadgetNetwork.from_map(m, parts=parts, mode=mode)
    assert compose_vr(net) == count_vr(m, mode)


@SETTINGS
@given(seeds, st.integers(1, 4), st.sampled_from([3, 5, 7]))
def test_modular_path_consistent(seed, n, p):
    m = random_gadget(random.Random(seed), n)
    assert count_vr(m, engine="merge", modulus=p) == count_vr(m).reduce(p)


@SETTINGS
@given(seeds, st.integers(1, 5), st.integers(1, 5), st.sampled_from(["graph", "map"]))
def test_glue_homomorphism(seed, n1, n2, kind):
    rng = random.Random(seed)
    n2 = min(n2, 6 - n1)
    g1, g2 = random_gadget(rng, n1, kind), random_gadget(rng, n2, kind)
    mode = ATRAIL if kind == "map" else GENERAL
    if not count_vr(g1, mode).total() or not count_vr(g2, mode).total():
        return
    s1, s2 = signature_of(g1), signature_of(g2)
    if s1.alpha == 1 and s2.alpha == 1:
        return
    assert signature_of(glue_build(g1, g2)) == glue_signature(s1, s2)


@SETTINGS
@given(seeds, st.permutations(range(4)))
def test_relabel_equivariance(seed, perm):
    g = random_gadget(random.Random(seed), random.Random(seed).randint(1, 4))
    assert signature_of(relabel(g, perm)) == relabel_signature(signature_of(g), perm)


simplex = st.tuples(st.integers(0, 60), st.integers(0, 60), st.integers(0, 60)).filter(lambda t: sum(t) > 0)


@SETTINGS
@given(simplex, simplex)
def test_glue_total(t1, t2):
    s1 = tuple(F(x, sum(t1)) for x in t1)
    s2 = tuple(F(x, sum(t2)) for x in t2)
    assert sum(glue_counts(s1, s2)) == 1 - s1[0] * s2[0]


@SETTINGS
@given(st.integers(1, 12), st.data())
def test_map_synthesis_exact(q, data):
    a = data.draw(st.integers(0, q - 1))
    b = data.draw(st.integers(0, q - a))
    target = (F(a, q), F(b, q), F(q - a - b, q))
    if max(target) == 1:
        return
    _, tr = synthesize_map_gadget(target, build=False)
    assert tr.replay_signature().as_tuple() == target


@settings(max_examples=15, deadline=None)
@given(st.integers(2, 5), st.integers(0, 12))
def test_chain_doubly_stochastic(d, T):
    dist = chain_distribution(d, T, start="uniform")
    assert set(dist.probs.values()) == {F(1, math.factorial(d))}
    assert chain_distribution(d, T).total() == 1


@SETTINGS
@given(st.integers(0, 10 ** 12), st.sampled_from([{6: 1}, {6: 2}, {8: 1}, {6: 1, 8: 1}]))
def test_crt_round_trip(T, counts):
    prof = DegreeProfile(counts)
    primes = select_primes(64, max(counts), 10 ** 12)
    pairs = [(T * prof.factor() % p, p) for p in primes]
    assert unscale_and_crt(pairs, prof) == T


@SETTINGS
@given(seeds, st.integers(1, 4))
def test_trace_is_total(seed, n):
    rng = random.Random(seed)
    m = random_gadget(rng, n, "map")
    all_ts = list(transition_systems(m))
    ts = all_ts[rng.randrange(len(all_ts))]
    dec = trace(m, ts)
    assert dec.edge_multiset(m) == m.edge_multiset()
    assert sorted(l for r in dec.routes for l in r[:2]) == [0, 1, 2, 3]


@SETTINGS
@given(seeds, st.integers(1, 5))
def test_codec_round_trip(seed, n):
    m = random_gadget(random.Random(seed), n, "map", loops=True)
    text = m.to_json()
    assert MixedMap.from_json(text).to_json() == text
    assert count_vr(MixedMap.from_json(text)) == count_vr(m)


@SETTINGS
@given(simplex)
def test_region_symmetric(t):
    s = tuple(F(x, sum(t)) for x in t)
    r = RegionS()
    assert len({r.classify(p) for p in itertools.permutations(s)}) == 1


@SETTINGS
@given(st.lists(st.lists(st.integers(-20, 20), min_size=4, max_size=4), min_size=4, max_size=4))
def test_bareiss_matches_leibniz(mat):
    want = 0
    for perm in itertools.permutations(range(4)):
        sign = (-1) ** sum(1 for i in range(4) for j in range(i) if perm[j] > perm[i])
        want += sign * math.prod(mat[i][perm[i]] for i in range(4))
    assert bareiss_det(mat) == want

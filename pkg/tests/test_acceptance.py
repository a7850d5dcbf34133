"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v`` (add ``-s`` to see the lines
interleaved with pytest's own output; they are always printed).
"""

import math
import random
import time
from fractions import Fraction as F

import pytest

from eulercount import fixtures
from eulercount.chain import gadget_chain_check
from eulercount.counting import compose_vr, count_closed, count_vr
from eulercount.experiments import closure_sample, region_scan
from eulercount.gadgets import (build_0xy, build_q, build_xyy, glue_build, is_permutation_type, oxy_counts, r_d,
                                sgg, smg)
from eulercount.graph import ATRAIL, GENERAL, transition_systems
from eulercount.kotzig import count_atrails_plane, medial_map
from eulercount.reductions import count_planarized_mod_p, estimate_et, et_via_crt, to_atrail_instance
from eulercount.region import RegionS
from eulercount.signature import SGG_SIGNATURE, SMG_SIGNATURE, glue_signature, signature_of
from eulercount.synthesis import synthesize_graph_gadget, synthesize_map_gadget

from conftest import interior_targets, random_gadget, targets_up_to


@pytest.fixture
def gate(capsys):
    """Call ``gate(n, title, ok, seconds, budget)`` to print and enforce one criterion."""
    def check(n, title, ok, seconds, budget):
        ok = ok and seconds < budget
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {n}: {title} ({seconds:.1f}s, budget {budget}s)")
        assert ok
    return check


def test_criterion_01_xyy_ladder(gate):
    t0 = time.perf_counter()
    ok = all(count_vr(build_xyy(k)).triple() == (k * 2 ** (k - 1), 2 ** (k - 1), 2 ** (k - 1))
             for k in range(1, 7))
    gate(1, "xyy ladder counts for k = 1..6", ok, time.perf_counter() - t0, 10)


def test_criterion_02_oxy_crossover(gate):
    t0 = time.perf_counter()
    ok = True
    for p, k in [(3, 1), (3, 2), (3, 3), (5, 1)]:
        A, B = 2 ** (k - 1), k * 2 ** (k - 1)
        want = (p * A * (A + B) ** (p - 1), ((A + B) ** p - (B - A) ** p) // 2, ((A + B) ** p + (B - A) ** p) // 2)
        got = count_vr(build_0xy(p, k)).triple()
        ok &= got == want == oxy_counts(p, k)
        ok &= tuple(x % p for x in got) == (0, A % p, B % p)
    gate(2, "0xy counts and mod-p congruences", ok, time.perf_counter() - t0, 120)


def test_criterion_03_q_gadget(gate):
    t0 = time.perf_counter()
    ok = True
    for d, p in [(2, 5), (3, 5), (3, 7), (4, 5)]:
        table = compose_vr(build_q(d, p), modulus=p)
        perms = 0
        for rt in table.types():
            if is_permutation_type(rt, d):
                perms += 1
                ok &= table[rt] % p == r_d(d) % p
            else:
                ok &= table[rt] % p == 0
        ok &= perms == math.factorial(d)
    gate(3, "Q gadget residues R_d on permutations, 0 elsewhere", ok, time.perf_counter() - t0, 300)


def test_criterion_04_crt_pipeline(gate):
    t0 = time.perf_counter()
    ok = True
    for g in (fixtures.dipole(6), fixtures.k5_plus()):
        rep = et_via_crt(g)
        ok &= rep.count == count_closed(g, engine="brute")
        ok &= all(p > max(g.degrees().values()) for p in rep.primes)
    gate(4, "CRT reconstruction for the 6-dipole and a degree-6 graph", ok, time.perf_counter() - t0, 600)


def test_criterion_05_planarized_k5(gate):
    t0 = time.perf_counter()
    k5 = fixtures.complete(5)
    ok = sum(1 for _ in transition_systems(k5)) == 243
    T = count_closed(k5, engine="brute")
    ok &= T == 132
    for p in (3, 5):
        n, _ = count_planarized_mod_p(k5, p)
        ok &= n % p == T % p
    gate(5, "planarized K5 count congruent to 132 mod 3 and 5", ok, time.perf_counter() - t0, 300)


def test_criterion_06_atrail_relation(gate):
    t0 = time.perf_counter()
    ok = True
    for name in ("4dipole", "doubled-c3", "k5"):
        g = fixtures.GRAPHS[name]()
        ok &= count_closed(to_atrail_instance(g), ATRAIL, engine="merge") == 2 ** g.n_vertices * count_closed(g)
    gate(6, "#A-trails(G') = 2^|V| #ET(G)", ok, time.perf_counter() - t0, 120)


def test_criterion_07_kotzig(gate, kotzig_corpus):
    t0 = time.perf_counter()
    maps = {name: medial_map(g) for name, g in kotzig_corpus.items()}
    maps["plane-4dipole"] = fixtures.plane_dipole4()
    ok = len(maps) >= 6
    for name, m in maps.items():
        ok &= count_atrails_plane(m) == count_closed(m, ATRAIL, engine="brute")
    ok &= count_atrails_plane(fixtures.plane_dipole4()) == 2 == count_closed(fixtures.plane_dipole4(), ATRAIL)
    octa = fixtures.octahedron()
    ok &= count_atrails_plane(octa) == 16 == count_closed(octa, ATRAIL)
    gate(7, f"Kotzig count equals brute force on {len(maps)} plane maps", ok, time.perf_counter() - t0, 60)


def test_criterion_08_gadget_chain_and_ap(gate):
    t0 = time.perf_counter()
    ok = all(gadget_chain_check(d, T) for d in (2, 4) for T in range(4))
    for g in (fixtures.dipole(4), fixtures.doubled_cycle(3)):
        T = count_closed(g)
        for eps in (0.25, 0.5, 1.0):
            ok &= abs(math.log(estimate_et(g, eps) / T)) <= eps
    gate(8, "shuffle gadget equals sweep chain; AP estimate within e^eps", ok, time.perf_counter() - t0, 600)


def test_criterion_09_glue_homomorphism(gate):
    t0 = time.perf_counter()
    rng = random.Random(2024)
    ok, done = True, 0
    while done < 200:
        kind = "graph" if done % 2 else "map"
        n1 = rng.randint(1, 5)
        n2 = rng.randint(1, 6 - n1)
        g1, g2 = random_gadget(rng, n1, kind), random_gadget(rng, n2, kind)
        mode = ATRAIL if kind == "map" else GENERAL
        t1, t2 = count_vr(g1, mode), count_vr(g2, mode)
        s1, s2 = (signature_of(t) for t in (t1, t2)) if t1.total() and t2.total() else (None, None)
        if s1 is None or (s1.alpha == 1 and s2.alpha == 1):
            continue  # no signature for the glued gadget; draw again
        ok &= signature_of(glue_build(g1, g2)) == glue_signature(s1, s2)
        done += 1
    ok &= signature_of(smg()).as_tuple() == SMG_SIGNATURE.as_tuple() == (F(1, 2), F(1, 2), 0)
    ok &= signature_of(sgg()).as_tuple() == SGG_SIGNATURE.as_tuple() == (F(1, 3),) * 3
    gate(9, "glue homomorphism on 200 random pairs; SMG and SGG", ok, time.perf_counter() - t0, 300)


def test_criterion_10_region(gate):
    t0 = time.perf_counter()
    r = RegionS(prec=128)
    u, w = r.u(), r.w()
    ok = u <= 0.39 and 0.5 <= w <= 0.64
    for n in range(1, 5):
        ok &= region_scan(n).n_outside == 0
    ok &= closure_sample(10 ** 4, seed=1).n_outside == 0
    gate(10, f"u = {float(u):.6f}, w = {float(w):.6f}; scans n <= 4 and 10^4 glues stay in S",
         ok, time.perf_counter() - t0, 1800)


def test_criterion_11_synthesis(gate):
    t0 = time.perf_counter()
    ok = True
    targets = targets_up_to(6)
    for target in targets:
        g, _ = synthesize_map_gadget(target)
        ok &= signature_of(count_vr(g, ATRAIL, engine="brute")).as_tuple() == target
    for eps in (0.05, 0.01):
        for target in interior_targets(10, seed=7):
            _, tr = synthesize_graph_gadget(target, eps, build=False)
            ok &= tr.replay_signature().l1(target) <= F(eps)
    gate(11, f"{len(targets)} map targets exact; graph targets within eps 0.05 and 0.01",
         ok, time.perf_counter() - t0, 600)

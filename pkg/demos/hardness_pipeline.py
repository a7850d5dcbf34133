"""Walk through the gadget reductions on concrete inputs.

1. Each degree-6 vertex of the 6-dipole is replaced by a Q gadget.  Modulo a
   prime p the expanded 4-regular graph counts T times a known factor.
2. K5 is drawn with crossings; every crossing becomes a crossover gadget and
   the result is a plane 4-regular graph with the same count modulo p.
3. Every vertex of a 4-regular graph becomes a small map gadget, which turns
   tour counting into a-trail counting with an exact factor 2^|V|.
"""

from eulercount import fixtures
from eulercount.counting import compose_vr, count_closed
from eulercount.graph import ATRAIL
from eulercount.kotzig import trace_faces
from eulercount.reductions import (DEFAULT_THRESHOLD, DegreeProfile, count_planarized_mod_p, expand_to_4regular,
                                   planarize, to_atrail_instance)


def expansion():
    g = fixtures.dipole(6)
    T = count_closed(g)
    f = DegreeProfile.of(g, DEFAULT_THRESHOLD).factor()
    print(f"6-dipole: T = {T}, scaling factor {f}")
    for p in (7, 11, 13):
        net = expand_to_4regular(g, p)
        r = compose_vr(net, modulus=p).closed_count
        print(f"  p = {p:>2}: count of expansion = {r}, T*factor mod p = {T * f % p}")


def planar():
    k5 = fixtures.complete(5)
    T = count_closed(k5)
    print(f"\nK5: T = {T}")
    for p in (3, 5):
        m, rep = planarize(k5, p)
        n, _ = count_planarized_mod_p(k5, p)
        genus = trace_faces(m).genus
        print(f"  p = {p}: {len(rep.crossings)} crossings, {m.n_vertices} vertices, genus {genus}, "
              f"count mod p = {n % p}, T mod p = {T % p}")


def atrails():
    print()
    for name in ("4dipole", "doubled-c3", "k5"):
        g = fixtures.GRAPHS[name]()
        m = to_atrail_instance(g)
        a = count_closed(m, ATRAIL, engine="merge")
        print(f"{name:<11} #ET = {count_closed(g):>4}   #A-trails = {a:>6} = 2^{g.n_vertices} * #ET")


if __name__ == "__main__":
    expansion()
    planar()
    atrails()

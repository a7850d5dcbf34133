"""Signatures, gluing, and the conjectured region S.

A gadget's signature is the normalised triple of route counts.  Gluing two
gadgets acts on signatures by a fixed rational map, and every signature we
can find lands inside the region S.  Map gadgets reach every rational point
exactly; graph gadgets get arbitrarily close to interior points.
"""

from fractions import Fraction as F

from eulercount.experiments import closure_sample, region_scan
from eulercount.gadgets import sgg, smg
from eulercount.region import RegionS
from eulercount.signature import glue_signature, signature_of
from eulercount.synthesis import synthesize_graph_gadget, synthesize_map_gadget


def main():
    r = RegionS()
    print(f"u = {float(r.u()):.6f}  w = {float(r.w()):.6f}")
    s1, s2 = signature_of(smg()), signature_of(sgg())
    print("SMG", s1.as_tuple(), " SGG", s2.as_tuple(), " glued", glue_signature(s1, s2).as_tuple())

    for n in range(1, 5):
        rep = region_scan(n)
        print(f"gadgets on <= {n} vertices: {rep.gadgets:>3}, outside S: {rep.n_outside}, "
              f"closest to the boundary: {rep.min_margin:.4f}")
    rep = closure_sample(2000, seed=3)
    print(f"2000 random glues of points of S: {rep.classes}")

    g, tr = synthesize_map_gadget((F(2, 5), F(2, 5), F(1, 5)))
    print(f"\nmap gadget for (2/5, 2/5, 1/5): {g.n_vertices} vertices, {len(tr.steps)} steps")
    target = (F(9, 20), F(3, 10), F(1, 4))
    for eps in (0.05, 0.02, 0.01):
        _, tr = synthesize_graph_gadget(target, eps, build=False)
        print(f"graph gadget for {tuple(map(str, target))} at eps {eps}: "
              f"{tr.n_vertices()} vertices, L1 error {float(tr.replay_signature().l1(target)):.2e}")


if __name__ == "__main__":
    main()

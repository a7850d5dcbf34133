"""The sweep gadget is a card-shuffling chain in disguise.

Layers of crossover vertices act as adjacent transpositions, each applied
with probability one half.  Normalised route counts of the gadget equal the
distribution of the even/odd sweep chain, and the number of layers needed
to get within eps/d! of uniform governs the approximation reduction.
"""

from eulercount import fixtures
from eulercount.chain import chain_distribution, gadget_chain_check, mixing_report, tv_to_uniform
from eulercount.config import calibrated_constant
from eulercount.reductions import estimate_et


def main():
    print("TV distance to uniform on S_4, by number of layers")
    for T in range(0, 9):
        tv = tv_to_uniform(chain_distribution(4, T))
        print(f"  T = {T}: {float(tv):.5f}")

    print("\ngadget vs chain:", all(gadget_chain_check(d, T) for d in (2, 4) for T in range(4)))

    C = calibrated_constant()
    print(f"\nminimal layers for TV <= eps/d! (eps = 0.1), and the formula with C = {C}")
    for d in (2, 3, 4, 5, 6):
        rep = mixing_report(d, 0.1, C)
        print(f"  d = {d}: minimal {rep.minimal_T}, formula {rep.T}, bound met: {rep.within_bound}")

    g = fixtures.doubled_cycle(3)
    # every vertex has degree 4, so d = 2 and one layer is already exactly uniform
    print("\nAP estimate of #ET(doubled C3) = 16:")
    for eps in (1.0, 0.5, 0.25):
        print(f"  eps = {eps}: {float(estimate_et(g, eps)):.4f}")


if __name__ == "__main__":
    main()

"""A-trails of plane medial maps through spanning trees.

For a plane 4-regular map the faces can be two-coloured.  The black faces
form a plane graph whose spanning trees are in bijection with the a-trails,
so a determinant replaces an exponential search.
"""

from eulercount import fixtures
from eulercount.counting import count_closed
from eulercount.graph import ATRAIL
from eulercount.kotzig import count_atrails_plane, medial_map


def main():
    rows = [("plane 4-dipole", fixtures.plane_dipole4()), ("octahedron", fixtures.octahedron())]
    rows += [(f"medial({name})", medial_map(make())) for name, make in fixtures.PLANE_MAPS.items()]
    print(f"{'map':<18}{'vertices':>9}{'determinant':>13}{'brute force':>13}")
    for name, m in rows:
        print(f"{name:<18}{m.n_vertices:>9}{count_atrails_plane(m):>13}{count_closed(m, ATRAIL, engine='merge'):>13}")


if __name__ == "__main__":
    main()

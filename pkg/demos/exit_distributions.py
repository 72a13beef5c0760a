"""Exit distributions and the Liouville probe.

The l^1 distance between the exit laws of two neighbouring starting
points through growing balls detects bounded harmonic functions: decay
to zero is Liouville-type evidence, a positive floor is evidence
against.  Z^2 decays like 1/r; the 4-regular tree (free group on two
generators) sticks at a floor slightly above 1.
"""

from harmlab.cayley import build_group, cayley_ball
from harmlab.graphs import regular_tree
from harmlab.harmonic import liouville_probe


def main():
    B = cayley_ball(build_group("zd:2"), 21)
    v = B.identity_vertex
    w = B.vertex_of[(1, 0)]
    print("Z^2: ||ex_0 - ex_(1,0)||_1 through balls of radius r")
    for row in liouville_probe(B.graph, v, v, w, radii=[2, 5, 10, 15, 20]):
        print(f"  r = {row['r']:2d}: l1 = {row['l1']:.6f}"
              f"  linf = {row['linf']:.2e}")

    T = regular_tree(4, 10)
    print("4-regular tree: same probe between the root and a child")
    for row in liouville_probe(T, 0, 0, 1, radii=[3, 5, 7, 9]):
        print(f"  r = {row['r']:2d}: l1 = {row['l1']:.6f}")
    print("  the positive floor reflects the wealth of bounded harmonic"
          " functions on the tree")


if __name__ == "__main__":
    main()

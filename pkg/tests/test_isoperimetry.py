import numpy as np
import pytest

import harmlab.isoperimetry as I
import harmlab.spectral as S
from harmlab.cayley import build_group, cayley_ball
from harmlab.errors import (ComplementDisconnected, DisconnectedSet,
                            EnumerationBudgetExceeded)
from harmlab.graphs import (cycle_graph, hypercube_graph,
                            random_regular_graph, subset_view, torus_grid)


def square_in_z2(ball_obj, n):
    return [ball_obj.vertex_of[(i, j)] for i in range(n) for j in range(n)]


@pytest.fixture(scope="module")
def z2ball():
    return cayley_ball(build_group("zd:2"), 12)


class TestEnumeration:
    def test_counts_on_cycle(self):
        # connected subsets of C_n of size s are the n arcs, for s < n
        G = cycle_graph(7)
        seen = {}
        for Sset, b in I.connected_subsets(G, 4):
            seen[len(Sset)] = seen.get(len(Sset), 0) + 1
            assert b == subset_view(G, Sset).boundary_size
        assert seen == {1: 7, 2: 7, 3: 7, 4: 7}

    def test_no_duplicates(self):
        G = torus_grid(3, 3)
        out = set()
        for Sset, _ in I.connected_subsets(G, 4):
            key = frozenset(Sset)
            assert key not in out
            out.add(key)

    def test_budget(self):
        G = hypercube_graph(4)
        with pytest.raises(EnumerationBudgetExceeded):
            list(I.connected_subsets(G, 8, budget=100))

    def test_allowed_restriction(self):
        G = cycle_graph(8)
        allowed = [0, 1, 2]
        for Sset, _ in I.connected_subsets(G, 3, allowed=allowed):
            assert set(Sset) <= set(allowed)


class TestProfile:
    def test_c6(self):
        prof = I.profile(cycle_graph(6), 3)
        assert prof.table[1][0] == 2
        assert prof.table[2][0] == 2
        assert prof.table[3][0] == 2
        assert abs(prof.kappa1(6) - 2 / 3) < 1e-12

    def test_envelope_nonincreasing(self):
        prof = I.profile(torus_grid(4, 4), 8)
        env = prof.envelope()
        vals = [env[s] for s in range(1, 9)]
        assert vals == sorted(vals, reverse=True)

    def test_kappa1_matches_spectral(self):
        for G in (cycle_graph(8), hypercube_graph(3),
                  random_regular_graph(3, 12, seed=0)):
            prof = I.profile(G, G.n // 2)
            k1, _, _ = S.cheeger_kappa1(G)
            assert abs(prof.kappa1(G.n) - k1) < 1e-12

    def test_milp_agrees_with_enumeration(self):
        G = torus_grid(4, 4)
        prof = I.profile(G, 8)
        for s in range(1, 9):
            b, wit = I.min_boundary_exact(G, s)
            assert b == prof.table[s][0]
            assert len(wit) == s

    def test_milp_witness_value(self):
        G = hypercube_graph(4)
        b, wit = I.min_boundary_exact(G, 8)
        assert subset_view(G, wit).boundary_size == b
        assert b == 8  # a facet of Q4


class TestGeometry:
    def test_square_quantities(self, z2ball):
        G = z2ball.graph
        F = square_in_z2(z2ball, 5)
        assert subset_view(G, F).boundary_size == 20
        assert I.inradius(G, F) == 2
        assert I.diameter(G, F) == 8
        assert abs(I.mean_boundary_distance(G, F) - 0.4) < 1e-12

    def test_inradius_ball_fits(self, z2ball):
        G = z2ball.graph
        for n in (3, 4, 6):
            F = square_in_z2(z2ball, n)
            r = I.inradius(G, F)
            lo, _ = I.growth_functions(G, r, vertices=[0])
            assert lo[r] <= len(F)

    def test_diameter_disconnected(self):
        G = cycle_graph(8)
        with pytest.raises(DisconnectedSet):
            I.diameter(G, [0, 4])

    def test_growth_z2(self, z2ball):
        G = z2ball.graph
        lo, hi = I.growth_functions(G, 5, vertices=[0])
        want = [2 * r * r + 2 * r + 1 for r in range(6)]
        assert list(lo) == want and list(hi) == want

    def test_radial_check_square(self, z2ball):
        G = z2ball.graph
        F = square_in_z2(z2ball, 5)
        out = I.radial_iso_check(G, F)
        assert out["holds"] and out["diameter_holds"]
        assert abs(out["lhs"] - 20 * 3) < 1e-12
        assert abs(out["diameter_lhs"] - 20 * 9) < 1e-12

    def test_radial_check_needs_connected_complement(self):
        G = cycle_graph(10)
        with pytest.raises(ComplementDisconnected):
            I.radial_iso_check(G, [0, 1, 5, 6])

    def test_doubling_envelope(self):
        # on the torus the optimal ratio at size 2s is no worse than at s
        prof = I.profile(torus_grid(5, 5), 12)
        env = prof.envelope()
        for s in range(1, 7):
            assert env[2 * s] <= env[s] + 1e-12

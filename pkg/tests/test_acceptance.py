"""End-to-end acceptance checks.

Each test prints one PASS/FAIL line on the real stdout so the verdicts
survive pytest's capture.  Criteria marked with runtime limits are timed.
"""

import functools
import json
import sys
import time
from pathlib import Path

import numpy as np
import pytest

import harmlab.harmonic as H
import harmlab.isoperimetry as I
import harmlab.spectral as S
import harmlab.transport as T
import harmlab.walk as W
import harmlab.window as WD
from harmlab.cayley import build_group, cayley_ball
from harmlab.graphs import (Distribution, VertexField, ball, bfs_distances,
                            complete_graph, cycle_graph, divergence,
                            gradient, hypercube_graph, lp_norm, path_graph,
                            random_regular_graph, regular_tree, subset_view,
                            torus_grid, walk_step)

FIXTURES = Path(__file__).parent / "fixtures"


def verdict(num, desc):
    def wrap(fn):
        @functools.wraps(fn)
        def inner(*args, **kwargs):
            try:
                fn(*args, **kwargs)
            except BaseException:
                print(f"FAIL criterion {num}: {desc}",
                      file=sys.__stdout__, flush=True)
                raise
            print(f"PASS criterion {num}: {desc}",
                  file=sys.__stdout__, flush=True)
        inner.__name__ = fn.__name__
        return inner
    return wrap


def corpus():
    graphs = []
    for n in range(3, 13):
        graphs.append((f"C{n}", cycle_graph(n)))
    for n in range(3, 9):
        graphs.append((f"K{n}", complete_graph(n)))
    for d in range(1, 5):
        graphs.append((f"Q{d}", hypercube_graph(d)))
    for w, h in ((3, 3), (3, 4), (4, 4), (4, 5), (5, 5), (6, 6)):
        graphs.append((f"T{w}x{h}", torus_grid(w, h)))
    rng = np.random.default_rng(0)
    for i, n in enumerate((8, 10, 10, 12, 14, 14, 16, 18, 20, 20)):
        graphs.append((f"R3_{i}", random_regular_graph(3, n, seed=100 + i)))
    return graphs


@pytest.fixture(scope="module")
def corp():
    return corpus()


@verdict(1, "kappa_2 squared equals d * lambda_2 on the corpus (1e-8)")
def test_criterion_01_spectral_identity(corp):
    t0 = time.time()
    for name, G in corp:
        d = G.regular_degree
        lam2 = S.lambda2(G)
        # independent route: second eigenvalue of the combinatorial
        # Laplacian B^T B from the incidence matrix
        B = S._gradient_matrix(G).toarray()
        sigma = np.sort(np.linalg.eigvalsh(B.T @ B))[1]
        assert abs(sigma - d * lam2) <= 1e-8, name
        k2, direction, _ = S.kappa_p_estimate(G, 2)
        assert direction == "exact"
        assert abs(k2 ** 2 - d * lam2) <= 1e-8, name
    assert time.time() - t0 < 10.0


@verdict(2, "Cheeger chain with exact kappa_1; equalities on C4 and Q3")
def test_criterion_02_cheeger_chain(corp):
    t0 = time.time()
    vals = {}
    for name, G in corp:
        d = G.regular_degree
        k1, wit, direction = S.cheeger_kappa1(G)
        assert direction == "exact", name
        F = subset_view(G, wit)
        assert abs(F.boundary_size / F.size - k1) < 1e-12, name
        lam2 = S.lambda2(G)
        assert k1 ** 2 / (2 * d ** 2) <= lam2 + 1e-12, name
        assert lam2 <= 2 * k1 / d + 1e-12, name
        vals[name] = (d, k1, lam2)
    # equality cases: C4 saturates 4 d kappa_1 = 2 d^2 lambda_2,
    # Q3 saturates lambda_2 = 2 kappa_1 / d
    d, k1, lam2 = vals["C4"]
    assert abs(4 * d * k1 - 2 * d ** 2 * lam2) < 1e-10
    d, k1, lam2 = vals["Q3"]
    assert abs(lam2 - 2 * k1 / d) < 1e-10
    assert time.time() - t0 < 60.0


@verdict(3, "inequality items 1 and 3 hold under the certified-direction "
            "policy, slack 1.10, p in {1.5, 3, 4}")
def test_criterion_03_witness_inequalities(corp):
    for name, G in corp:
        rep = S.verify_gap_chain(G, p_list=(1.5, 3, 4))
        bad = [q for q in rep.inequalities
               if q.item in ("item1", "item3") and not q.holds]
        assert bad == [], (name, bad)


@verdict(4, "Z-segment exits match gambler's ruin (k+1)/(n+2) to 1e-10")
def test_criterion_04_gamblers_ruin():
    rng = np.random.default_rng(1)
    for n in range(1, 201):
        G = path_graph(n + 3)
        A = subset_view(G, range(1, n + 2))
        ex0 = W.exit_distribution(G, A, 1)
        ex1 = W.exit_distribution(G, A, 2)
        assert abs(ex0[n + 2] - 1 / (n + 2)) <= 1e-10
        assert abs(ex1[n + 2] - 2 / (n + 2)) <= 1e-10
        l1 = float(np.abs(ex0.a - ex1.a).sum())
        assert abs(l1 - 2 / (n + 2)) <= 1e-10
        if n % 20 == 0:
            for k in rng.integers(0, n + 1, 3):
                ex = W.exit_distribution(G, A, int(k) + 1)
                assert abs(ex[n + 2] - (k + 1) / (n + 2)) <= 1e-10
                assert abs(ex[0] - (n + 1 - k) / (n + 2)) <= 1e-10


@verdict(5, "Liouville probe: decay on Z^2, positive floor on free(2); "
            "values match frozen fixtures")
def test_criterion_05_liouville_probe():
    t0 = time.time()
    frozen_z2 = json.loads((FIXTURES / "liouville_z2.json").read_text())
    want_z2 = [frozen_z2["l1_by_radius"][str(r)] for r in range(2, 31)]
    B = cayley_ball(build_group("zd:2"), 31)
    v = B.identity_vertex
    w = B.vertex_of[(1, 0)]
    rows = H.liouville_probe(B.graph, v, v, w, radii=range(2, 31))
    vals = [r["l1"] for r in rows]
    assert all(x >= y - 1e-12 for x, y in zip(vals, vals[1:]))
    assert vals[-1] <= want_z2[-1] + 1e-9
    assert np.abs(np.array(vals) - np.array(want_z2)).max() <= 1e-9

    frozen_f2 = json.loads((FIXTURES / "liouville_free2.json").read_text())
    want_f2 = [frozen_f2["l1_by_radius"][str(r)] for r in range(4, 12)]
    Tr = regular_tree(4, 12)
    rows = H.liouville_probe(Tr, 0, 0, 1, radii=range(4, 12))
    vals = [r["l1"] for r in rows]
    assert all(x >= y - 1e-12 for x, y in zip(vals, vals[1:]))
    assert all(x > 0.1 for x in vals)
    assert np.abs(np.array(vals) - np.array(want_f2)).max() <= 1e-9
    assert time.time() - t0 < 300.0


@verdict(6, "10^3 transport patterns have residual <= 1e-9; Dirac "
            "wasserstein equals graph distance on 10^3 pairs")
def test_criterion_06_transport_validity():
    rng = np.random.default_rng(2)
    count = 0

    def sparse_measure(G, verts):
        a = np.zeros(G.n)
        sel = rng.choice(verts, size=min(6, len(verts)), replace=False)
        a[sel] = rng.random(len(sel))
        a /= a.sum()
        return Distribution(G, a)

    G = torus_grid(6, 6)
    for _ in range(400):
        mu, nu = sparse_measure(G, np.arange(G.n)), \
            sparse_measure(G, np.arange(G.n))
        _, pat = T.wasserstein1(G, mu, nu)
        assert pat.residual <= 1e-9
        count += 1
    A = ball(G, 0, 2)
    for _ in range(250):
        mu = sparse_measure(G, np.arange(G.n))
        pat = T.random_step_transport(G, mu, A)
        assert pat.residual <= 1e-9
        count += 1
    F = ball(G, 0, 2)
    for _ in range(150):
        a = np.zeros(G.n)
        a[F.members] = rng.normal(size=F.size)
        a[F.members] -= a[F.members].mean()
        pat = T.laplacian_transport(G, F, VertexField(G, a))
        assert pat.residual <= 1e-9
        count += 1
    g2 = build_group("zd:2")
    B2 = cayley_ball(g2, 12)
    word = g2.word(["s1"])
    for _ in range(100):
        interior = np.flatnonzero(B2.word_length <= 9)
        mu = sparse_measure(B2.graph, interior)
        pat = T.central_transport(B2, word, mu)
        assert pat.residual <= 1e-9
        count += 1
    Gc = cycle_graph(30)
    regions = [ball(Gc, 0, r) for r in range(1, 6)]
    for start in range(20):
        v = start
        w = (start + 1) % 30
        regs = [ball(Gc, v, r) for r in (1, 2, 3, 4, 5)]
        rows = T.exit_transport_chain(Gc, v, w, regs)
        for row in rows:
            assert row["residual"] <= 1e-9
            count += 1
    assert count >= 1000

    # Dirac-to-Dirac optimal cost equals BFS distance
    pairs = 0
    for spec, R in (("zd:2", 6), ("free:2", 5), ("lamplighter:2,1", 5)):
        B = cayley_ball(build_group(spec), R)
        G = B.graph
        for _ in range(334):
            x, y = rng.integers(0, G.n, 2)
            cost, pat = T.wasserstein1(G, Distribution.dirac(G, int(x)),
                                       Distribution.dirac(G, int(y)))
            d = bfs_distances(G, int(x))[int(y)]
            assert abs(cost - d) <= 1e-9
            assert pat.residual <= 1e-9
            pairs += 1
    assert pairs >= 1000


@verdict(7, "central transport l1 norm stays below |z|_S on Z^2 and "
            "Heisenberg for n <= 40")
def test_criterion_07_central_boundedness():
    g2 = build_group("zd:2")
    B2 = cayley_ball(g2, 42)
    word = g2.word(["s1"])
    a = np.zeros(B2.n)
    a[B2.identity_vertex] = 1.0
    worst = 0.0
    for n in range(41):
        mu = VertexField(B2.graph, a)
        pat = T.central_transport(B2, word, mu)
        assert pat.residual <= 1e-9
        worst = max(worst, pat.norm(1))
        a = B2.graph.adjacency_matrix().dot(a) / g2.degree
    assert worst <= 1.0 + 1e-9

    gh = build_group("heisenberg")
    Bh = cayley_ball(gh, 44)
    word = gh.central_word()
    a = np.zeros(Bh.n)
    a[Bh.identity_vertex] = 1.0
    worst = 0.0
    for n in range(41):
        mu = VertexField(Bh.graph, a)
        pat = T.central_transport(Bh, word, mu)
        assert pat.residual <= 1e-9
        worst = max(worst, pat.norm(1))
        a = Bh.graph.adjacency_matrix().dot(a) / gh.degree
    assert worst <= 4.0 + 1e-9


@verdict(8, "laplacian transport obeys ||tau||_2 <= 2 d lambda_2(F)^-1 "
            "||g||_2 on 10x10 and 14x14 boxes")
def test_criterion_08_laplacian_norm_bound():
    import scipy.linalg
    B = cayley_ball(build_group("zd:2"), 40)
    G = B.graph
    d = 4
    for side in (10, 14):
        lo = -(side // 2)
        members = [B.vertex_of[(i, j)] for i in range(lo, lo + side)
                   for j in range(lo, lo + side)]
        F = subset_view(G, members)
        sub, _ = F.induced_graph()
        L = (np.diag(sub.degrees.astype(float))
             - sub.adjacency_matrix().toarray())
        lam2F = np.sort(scipy.linalg.eigvalsh(L))[1] / d
        v = B.vertex_of[(0, 0)]
        w = B.vertex_of[(1, 0)]
        A = G.adjacency_matrix()
        for k in (5, 10, 20):
            mu = np.zeros(G.n)
            nu = np.zeros(G.n)
            mu[v] = 1.0
            nu[w] = 1.0
            for _ in range(k):
                mu = A.dot(mu) / d
                nu = A.dot(nu) / d
            # clip the difference to the box and recentre; for k <= the
            # inradius the restriction is a no-op
            a = mu - nu
            a[~F.mask] = 0.0
            a[F.members] -= a[F.members].mean()
            g = VertexField(G, a)
            pat = T.laplacian_transport(G, F, g)
            assert pat.residual <= 1e-9
            bound = 2 * d / lam2F * np.linalg.norm(a)
            assert pat.norm(2) <= bound + 1e-9, (side, k)


@verdict(9, "window codimension, projection diagonal bound and trace "
            "identity on Z^2 squares n = 3..8")
def test_criterion_09_window_stats():
    t0 = time.time()
    B = cayley_ball(build_group("zd:2"), 18)
    for n in range(3, 9):
        members = [B.vertex_of[(i, j)] for i in range(n) for j in range(n)]
        F = subset_view(B.graph, members)
        out = WD.window_projection_stats(B, F, "s1")
        assert out["codim"] == F.boundary_size - 1 == 4 * n - 1
        assert out["max_diag"] >= out["bound"] - 1e-9
        assert abs(out["trace"] - out["dim_Vprime"]) <= 1e-8
    assert time.time() - t0 < 120.0


@verdict(10, "Renyi monotonicity and interpolation on 10^3 random "
             "distributions; H_2 collision identity on Z and Z^2")
def test_criterion_10_renyi_suite():
    rng = np.random.default_rng(3)
    G = cycle_graph(1000)
    qs = [0, 0.5, 1, 1.5, 2, 4, 8, np.inf]
    for _ in range(1000):
        n = int(rng.integers(2, 1001))
        a = np.zeros(G.n)
        a[:n] = rng.random(n) ** 2
        mu = Distribution(G, a / a.sum())
        hs = [W.renyi(mu, q) for q in qs]
        for x, y in zip(hs, hs[1:]):
            assert x >= y - 1e-10
        for p, q in ((1.5, 2), (2, 4), (1.2, 8)):
            assert W.renyi(mu, p) <= (p * (q - 1)) / ((p - 1) * q) \
                * W.renyi(mu, q) + 1e-10
    for spec, R in (("zd:1", 62), ("zd:2", 62)):
        B = cayley_ball(build_group(spec), R)
        a = np.zeros(B.n)
        a[B.identity_vertex] = 1.0
        hist = [a]
        for _ in range(60):
            a = B.graph.adjacency_matrix().dot(a) / B.group.degree
            hist.append(a)
        for n in range(1, 31):
            h2 = W.renyi(Distribution(B.graph, hist[n], check=False), 2)
            assert abs(h2 + np.log(hist[2 * n][B.identity_vertex])) <= 1e-10


@verdict(11, "uniform-distribution gradient norm equals |bd F|/|F| on "
             "Folner boxes of Z^2 (sizes 4..400)")
def test_criterion_11_entropy_isoperimetry():
    B = cayley_ball(build_group("zd:2"), 45)
    G = B.graph
    nu = 2.0  # polynomial growth degree of the group
    fitted = np.inf
    checked = 0
    for m in range(2, 21):
        for n in range(m, 21):
            if m * n > 400:
                continue
            members = [B.vertex_of[(i, j)] for i in range(m)
                       for j in range(n)]
            F = subset_view(G, members)
            f = Distribution.uniform(G, members)
            lhs = lp_norm(gradient(f), 1)
            direct = F.boundary_size / F.size
            assert abs(lhs - direct) <= 1e-9, (m, n)
            if f.a.max() <= np.exp(-1.0):
                l, r, _ = W.entropy_isoperimetry_check(f, nu, 1.0)
                # fitted constant K making the bound tight, reported only
                fitted = min(fitted, l / r)
            checked += 1
    assert checked >= 100
    print(f"  criterion 11 fitted constant K = {fitted:.6f}",
          file=sys.__stdout__, flush=True)


@verdict(12, "Green partial sums: ||Delta g_n||_1 <= 2/n for n <= 200 on "
             "Z, Z^2 and free(2)")
def test_criterion_12_green_sums():
    for spec, R in (("zd:1", 202), ("zd:2", 202)):
        B = cayley_ball(build_group(spec), R)
        P = B.graph.adjacency_matrix() / B.group.degree
        a = np.zeros(B.n)
        a[B.identity_vertex] = 1.0
        acc = np.zeros(B.n)
        for n in range(1, 201):
            acc += a
            g = acc / n
            resid = np.abs(g - P.dot(g)).sum()
            assert resid <= 2.0 / n + 1e-12, (spec, n)
            a = P.dot(a)
    rt = W.RadialTreeWalk(4, 202)
    res = rt.green_residuals(200)
    n = np.arange(1, 201)
    assert np.all(res <= 2.0 / n + 1e-12)


@verdict(13, "tree flow is divergence free and level sums match the "
             "geometric closed form to 1e-12")
def test_criterion_13_tree_flow():
    d = 3
    Tr = regular_tree(d, 14)
    tau = H.tree_flow(Tr, (0, 1))
    div = divergence(tau)
    dist = np.minimum(bfs_distances(Tr, 0), bfs_distances(Tr, 1))
    interior = dist < 13
    assert np.abs(div.a[interior]).max() == 0.0
    for p in (1.5, 2.0, 3.0):
        sums = H.tree_flow_level_sums(Tr, (0, 1), tau, p)
        assert abs(sums[0] - 1.0) <= 1e-12
        for k in range(1, 14):
            # both branch directions contribute one geometric term each
            want = 2.0 * (d - 1.0) ** ((1 - p) * k)
            assert abs(sums[k] - want) <= 1e-12 * max(1.0, want), (p, k)

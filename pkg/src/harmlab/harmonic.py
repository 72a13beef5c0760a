"""Harmonicity diagnostics: Dirichlet extension, truncation, decay and
divergence profiles, Liouville probing, tree flows and approximate-kernel
witnesses.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import NotATree, SingularSystem, SupportHitsBoundary
from .graphs import (Distribution, EdgeField, VertexField, ball,
                     bfs_distances, divergence, gradient, lp_norm,
                     subset_view)
from .walk import exit_distribution


def harmonic_residual(f, G=None, interior=None):
    """sup |div grad f| over the given interior vertices (all by default)."""
    G = G or f.graph
    r = divergence(gradient(f, G), G).a
    if interior is not None:
        r = r[interior]
    return float(np.abs(r).max()) if len(r) else 0.0


def dirichlet_extend(G, A, boundary_values, method="solve"):
    """Unique function harmonic inside A with the given values on the
    outer boundary.  method="exit" instead averages the boundary data
    against per-vertex exit distributions (slow; cross-check path)."""
    bv = np.zeros(G.n)
    given = set()
    for v, val in boundary_values.items():
        bv[v] = val
        given.add(int(v))
    missing = [int(v) for v in A.outer_boundary if int(v) not in given]
    if missing:
        raise ValueError(f"boundary values missing on {missing[:5]}...")
    if method == "exit":
        out = bv.copy()
        for x in A.members:
            ex = exit_distribution(G, A, int(x))
            out[x] = float(np.dot(ex.a, bv))
        return VertexField(G, out)
    members = A.members
    k = len(members)
    pos = {int(x): i for i, x in enumerate(members)}
    rows, cols, data = [], [], []
    b = np.zeros(k)
    for i, x in enumerate(members):
        ej, _ = G.incident_edges(int(x))
        w = 1.0 / len(ej)
        for e in ej:
            y = int(G.tails[e]) if G.heads[e] == x else int(G.heads[e])
            j = pos.get(y)
            if j is None:
                b[i] += w * bv[y]
            else:
                rows.append(i)
                cols.append(j)
                data.append(w)
    M = sp.identity(k, format="csr") - sp.csr_matrix(
        (data, (rows, cols)), shape=(k, k))
    sol = spla.spsolve(M.tocsc(), b)
    if not np.all(np.isfinite(sol)):
        raise SingularSystem("Dirichlet solve failed")
    out = bv.copy()
    out[members] = sol
    return VertexField(G, out)


def truncate(f, t):
    """Clamp f at height t: unchanged where |f| < t, +-t elsewhere."""
    if t <= 0:
        raise ValueError("threshold must be positive")
    return VertexField(f.graph, np.clip(f.a, -t, t))


def _live_components(G, outside, shell):
    """Components of the set `outside` that meet `shell` (stand-in for the
    infinite components of a ball complement)."""
    mask = np.zeros(G.n, dtype=bool)
    mask[outside] = True
    comp = np.full(G.n, -1, dtype=np.int64)
    cid = 0
    live = set()
    shell_set = set(map(int, shell))
    for v in outside:
        if comp[v] >= 0:
            continue
        stack = [int(v)]
        comp[v] = cid
        verts = [int(v)]
        while stack:
            x = stack.pop()
            for u in G.neighbors(x):
                u = int(u)
                if mask[u] and comp[u] < 0:
                    comp[u] = cid
                    stack.append(u)
                    verts.append(u)
        if any(x in shell_set for x in verts):
            live.add(cid)
        cid += 1
    return comp, live


def gradient_decay(f, G, root, n_max=None):
    """gd_f(n): sup of |grad f| over edges outside the ball B(root, n),
    restricted to components of the complement that reach the outermost
    shell (finite stand-in for infinite components).  Nonincreasing."""
    dist = bfs_distances(G, root)
    R = int(dist.max())
    if n_max is None:
        n_max = R - 1
    g = np.abs(gradient(f, G).a)
    shell = np.flatnonzero(dist == R)
    out = []
    for n in range(n_max + 1):
        outside = np.flatnonzero(dist > n)
        if len(outside) == 0:
            out.append(0.0)
            continue
        comp, live = _live_components(G, outside, shell)
        t, h = G.tails, G.heads
        sel = ((dist[t] > n) & (dist[h] > n)
               & np.isin(comp[t], list(live)) & (comp[t] == comp[h]))
        out.append(float(g[sel].max()) if sel.any() else 0.0)
    return np.array(out)


def divergence_profile(G, root, K, n_max, h=None):
    """Annulus profile: S(n) is the complement of B(root, n) minus the
    far components of the complement of B(root, Kn); S_out its members
    next to the sphere of radius Kn + 1.  D(n) is the largest induced
    distance between members of S_out, per reachable pairs; unreachable
    pairs are reported as inf.

    If h is given, the products D(n) * gd_h(n) are included.
    """
    if K < 2 or int(K) != K:
        raise ValueError("K must be an integer >= 2")
    dist = bfs_distances(G, root)
    R = int(dist.max())
    gd = gradient_decay(h, G, root, n_max=n_max) if h is not None else None
    shell = np.flatnonzero(dist == R)
    rows = []
    for n in range(1, n_max + 1):
        if K * n + 1 > R:
            break
        outside_far = np.flatnonzero(dist > K * n)
        comp, live = _live_components(G, outside_far, shell)
        in_far_live = np.zeros(G.n, dtype=bool)
        if len(outside_far):
            in_far_live[outside_far] = np.isin(comp[outside_far], list(live))
        S = np.flatnonzero((dist > n) & ~in_far_live)
        at_knp1 = dist == K * n + 1
        s_out = [int(x) for x in S
                 if any(at_knp1[u] for u in G.neighbors(int(x)))]
        D = 0.0
        if len(S) and len(s_out) > 1:
            sv = subset_view(G, S)
            sub, members = sv.induced_graph()
            remap = {int(v): i for i, v in enumerate(members)}
            Dmax = 0.0
            for x in s_out:
                d = bfs_distances(sub, remap[x])
                targets = np.array([remap[y] for y in s_out if y != x])
                vals = d[targets]
                if np.any(vals < 0):
                    Dmax = np.inf
                vals = vals[vals >= 0]
                if len(vals):
                    Dmax = max(Dmax, float(vals.max()))
            D = Dmax
        row = {"n": n, "S_size": len(S), "S_out_size": len(s_out), "D": D}
        if gd is not None:
            row["gd"] = float(gd[n])
            row["product"] = D * float(gd[n])
        rows.append(row)
    return rows


def liouville_probe(G, center, v, w, radii):
    """l^1 distance between the exit laws of v and w through balls of
    growing radius; decay to 0 is Liouville-type evidence, a positive
    floor is evidence against.  Also reports max atom sums for the
    2 - eps criterion."""
    out = []
    for r in radii:
        A = ball(G, center, r)
        if len(A.outer_boundary) == 0:
            raise SupportHitsBoundary(f"radius {r} swallows the graph")
        exv = exit_distribution(G, A, v)
        exw = exit_distribution(G, A, w)
        diff = exv.a - exw.a
        out.append({
            "r": r,
            "l1": float(np.abs(diff).sum()),
            "linf": float(np.abs(diff).max()),
        })
    return out


def tree_flow(G, root_edge):
    """Unit flow through root_edge on a tree, split evenly at every branch
    so all interior vertices have zero divergence.  The value on an edge
    separated from the root edge by vertices of degrees d_1..d_k is
    1/((d_1 - 1)...(d_k - 1))."""
    if G.m != G.n - 1 or not G.is_connected:
        raise NotATree("tree flow needs a connected tree")
    x0, y0 = (int(root_edge[0]), int(root_edge[1]))
    a, b = (x0, y0) if x0 < y0 else (y0, x0)
    e0 = G.edge_index.get((a, b))
    if e0 is None:
        raise ValueError("root_edge is not an edge")
    tau = EdgeField(G)
    tau.a[e0] = 1.0 if (a, b) == (x0, y0) else -1.0
    # push flow outward from both endpoints; at each vertex the incoming
    # value splits over the deg-1 remaining edges
    stack = [(y0, x0, 1.0), (x0, y0, -1.0)]
    while stack:
        v, parent, inflow = stack.pop()
        ej, _ = G.incident_edges(v)
        others = [e for e in ej
                  if (int(G.tails[e]) if G.heads[e] == v else int(G.heads[e]))
                  != parent]
        if not others:
            continue
        share = inflow / len(others)
        for e in others:
            u = int(G.tails[e]) if G.heads[e] == v else int(G.heads[e])
            # positive share moves away from the root edge through v
            tau.a[e] += share if int(G.tails[e]) == v else -share
            stack.append((u, v, share))
    return tau


def tree_flow_level_sums(G, root_edge, tau, p):
    """l^p power sums of the flow per edge level (distance from the root
    edge)."""
    x0, y0 = int(root_edge[0]), int(root_edge[1])
    dist = np.minimum(bfs_distances(G, x0), bfs_distances(G, y0))
    # the root edge sits at level 0; an edge whose nearer endpoint is at
    # distance k - 1 from the root edge is at level k
    level = np.maximum(dist[G.tails], dist[G.heads])
    sums = {}
    for e in range(G.m):
        sums.setdefault(int(level[e]), 0.0)
        sums[int(level[e])] += abs(tau.a[e]) ** p
    return dict(sorted(sums.items()))


def laplacian_witness(G_or_ball, kind, n, center=0):
    """Witness families with small Laplacian-to-norm ratio.

    kind="c0": f = averaged ball indicators, sup-norm gradient <= 1/(n+1).
    kind="l1": f = Green partial sum over n+1 steps, ||Delta f||_1
    <= 2/(n+1).  Returns (field, ratio).
    """
    from .walk import green_partial
    if kind == "c0":
        if hasattr(G_or_ball, "graph"):
            G = G_or_ball.graph
            if n + 1 > G_or_ball.radius:
                raise SupportHitsBoundary("ball too small for this n")
        else:
            G = G_or_ball
        dist = bfs_distances(G, center)
        vals = np.clip((n + 1 - dist) / (n + 1.0), 0.0, None)
        vals[dist < 0] = 0.0
        f = VertexField(G, vals)
        return f, lp_norm(gradient(f, G), np.inf)
    if kind == "l1":
        g, resid = green_partial(G_or_ball, center, n + 1)
        return g, resid
    raise ValueError("kind must be 'c0' or 'l1'")

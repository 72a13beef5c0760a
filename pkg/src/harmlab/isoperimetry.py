"""Isoperimetric profiles and the geometry of finite vertex sets.

The profile G_down(x) = min { |boundary F| / |F| : |F| <= x } is computed
exactly by duplicate-free enumeration of connected subsets (a minimizing
set can be replaced by its best connected component).  An independent
integer-programming route gives exact minimal boundaries for spot checks
without the connectivity restriction.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.optimize
import scipy.sparse as sp

from .errors import (ComplementDisconnected, DisconnectedSet,
                     EnumerationBudgetExceeded)
from .graphs import SubsetView, bfs_distances, subset_view

ENUM_BUDGET = 10 ** 7


@dataclass
class IsoProfile:
    max_size: int
    table: dict = field(default_factory=dict)  # size -> (boundary, witness)
    complete: bool = True

    def ratio(self, size):
        b, _ = self.table[size]
        return b / size

    def envelope(self):
        """Nonincreasing envelope: size -> min ratio over sizes <= size."""
        out = {}
        best = np.inf
        for s in range(1, self.max_size + 1):
            if s in self.table:
                best = min(best, self.ratio(s))
            out[s] = best
        return out

    def kappa1(self, n_vertices):
        sizes = [s for s in self.table if s <= n_vertices // 2]
        return min(self.ratio(s) for s in sizes)


def connected_subsets(G, max_size, allowed=None, budget=ENUM_BUDGET):
    """Yield every connected vertex set of size <= max_size exactly once,
    as (members, boundary_size).  Boundary edges are counted in the full
    graph, including edges leaving the allowed region."""
    if allowed is None:
        allowed_mask = np.ones(G.n, dtype=bool)
    else:
        allowed_mask = np.zeros(G.n, dtype=bool)
        allowed_mask[np.asarray(list(allowed))] = True
    produced = 0
    nbrs = [list(map(int, G.neighbors(v))) for v in range(G.n)]
    deg = G.degrees
    for root in range(G.n):
        if not allowed_mask[root]:
            continue
        # binary branch-and-extend: include or forbid one candidate at a time
        stack = [([root], {root}, set(), int(deg[root]))]
        while stack:
            S, Sset, X, b = stack.pop()
            produced += 1
            if produced > budget:
                raise EnumerationBudgetExceeded(
                    f"more than {budget} connected sets", partial=None)
            yield S, b
            if len(S) >= max_size:
                continue
            cand = [u for v in S for u in nbrs[v]
                    if u > root and u not in Sset and u not in X
                    and allowed_mask[u]]
            seen = set()
            cand = [u for u in cand if not (u in seen or seen.add(u))]
            forb = set(X)
            for u in cand:
                join = sum(1 for w in nbrs[u] if w in Sset)
                stack.append((S + [u], Sset | {u}, set(forb),
                              b + int(deg[u]) - 2 * join))
                forb.add(u)
    _ = produced


def profile(G, max_size, allowed=None, budget=ENUM_BUDGET):
    """Exact isoperimetric table size -> (min boundary, witness set)."""
    prof = IsoProfile(max_size=max_size)
    try:
        for S, b in connected_subsets(G, max_size, allowed, budget):
            s = len(S)
            cur = prof.table.get(s)
            if cur is None or b < cur[0]:
                prof.table[s] = (b, list(S))
    except EnumerationBudgetExceeded as exc:
        prof.complete = False
        exc.partial = prof
        raise
    return prof


def min_boundary_exact(G, size, allowed=None):
    """Exact min |boundary F| over |F| = size via integer programming.

    Connectivity is not required, so the value can only be <= the
    enumeration table's entry; on profiles it agrees (best-component
    argument).  Returns (boundary, witness).
    """
    n, m = G.n, G.m
    rows, cols, data = [], [], []
    for e in range(m):
        u, v = int(G.tails[e]), int(G.heads[e])
        rows += [2 * e, 2 * e, 2 * e + 1, 2 * e + 1]
        cols += [u, v, u, v]
        data += [1.0, -1.0, -1.0, 1.0]
    rows += [2 * e for e in range(m)] + [2 * e + 1 for e in range(m)]
    cols += [n + e for e in range(m)] * 2
    data += [-1.0] * (2 * m)
    A = sp.csr_matrix((data, (rows, cols)), shape=(2 * m, n + m))
    ones = sp.csr_matrix(
        (np.ones(n), (np.zeros(n, dtype=int), np.arange(n))),
        shape=(1, n + m))
    c = np.concatenate([np.zeros(n), np.ones(m)])
    integrality = np.concatenate([np.ones(n), np.zeros(m)])
    ub = np.ones(n + m)
    if allowed is not None:
        mask = np.zeros(n, dtype=bool)
        mask[np.asarray(list(allowed))] = True
        ub[:n][~mask] = 0.0
    cons = [scipy.optimize.LinearConstraint(A, -np.inf, 0),
            scipy.optimize.LinearConstraint(ones, size, size)]
    res = scipy.optimize.milp(
        c, constraints=cons, integrality=integrality,
        bounds=scipy.optimize.Bounds(np.zeros(n + m), ub))
    if not res.success:
        raise EnumerationBudgetExceeded("integer program failed")
    witness = list(np.flatnonzero(np.round(res.x[:n]) > 0.5))
    return int(round(res.fun)), witness


# -- geometric quantities --------------------------------------------------


def inradius(G, F):
    """Largest r such that some ball B(x, r), x in F, stays inside F."""
    F = F if isinstance(F, SubsetView) else subset_view(G, F)
    comp = np.flatnonzero(~F.mask)
    if len(comp) == 0:
        # F = V: every ball fits; report the largest radius that matters
        return int(bfs_distances(G, 0).max())
    dist = bfs_distances(G, comp)
    return int(dist[F.members].max() - 1)


def diameter(G, F):
    """Diameter of the graph induced on F."""
    F = F if isinstance(F, SubsetView) else subset_view(G, F)
    sub, _ = F.induced_graph()
    best = 0
    for v in range(sub.n):
        d = bfs_distances(sub, v)
        if d.min() < 0:
            raise DisconnectedSet("induced graph on F is disconnected")
        best = max(best, int(d.max()))
    return best


def mean_boundary_distance(G, F):
    """Average over x in F of the induced-graph distance from x to an
    endpoint of a boundary edge lying in F (0 on boundary-adjacent
    vertices)."""
    F = F if isinstance(F, SubsetView) else subset_view(G, F)
    sub, members = F.induced_graph()
    remap = {int(v): i for i, v in enumerate(members)}
    sources = set()
    for e in F.boundary_edges:
        x, y = int(G.tails[e]), int(G.heads[e])
        sources.add(remap[x] if F.mask[x] else remap[y])
    if not sources:
        return 0.0
    d = bfs_distances(sub, sorted(sources))
    if d.min() < 0:
        # vertices cut off from the boundary inside F: treat distance as the
        # largest finite value (thick components of closed regions)
        d[d < 0] = d.max()
    return float(d.mean())


def growth_functions(G, R, vertices=None):
    """Minimal and maximal ball volumes f_v(r), f_V(r) for r = 0..R."""
    if vertices is None:
        vertices = range(G.n)
    lo = np.full(R + 1, np.inf)
    hi = np.zeros(R + 1)
    for v in vertices:
        d = bfs_distances(G, v)
        sizes = np.array([(np.count_nonzero((d >= 0) & (d <= r)))
                          for r in range(R + 1)], dtype=float)
        lo = np.minimum(lo, sizes)
        hi = np.maximum(hi, sizes)
    return lo, hi


def radial_iso_check(G, A, K=1.0, k=1.0):
    """Evaluate K |boundary A| (1 + inrad A)^k >= |A| and the diameter
    variant (which holds with K = k = 1 whenever the complement of A is
    connected)."""
    A = A if isinstance(A, SubsetView) else subset_view(G, A)
    comp = np.flatnonzero(~A.mask)
    if len(comp):
        sub = subset_view(G, comp)
        g, _ = sub.induced_graph()
        if not g.is_connected:
            raise ComplementDisconnected("complement of A is disconnected")
    lhs = K * A.boundary_size * (1.0 + inradius(G, A)) ** k
    rhs = float(A.size)
    dia = diameter(G, A)
    return {
        "lhs": lhs,
        "rhs": rhs,
        "holds": bool(lhs >= rhs),
        "diameter_lhs": float(A.boundary_size * (1 + dia)),
        "diameter_holds": bool(A.boundary_size * (1 + dia) >= A.size),
    }

"""Discrete calculus on finite oriented graphs.

Conventions: every adjacent pair {x, y} carries exactly one oriented edge,
canonically (x, y) with x < y.  The gradient of a vertex function f is
(grad f)(x, y) = f(y) - f(x); the divergence is its adjoint for the counting
inner product, div g (x) = -sum_{(x,y)} g(x,y) + sum_{(y,x)} g(y,x).
"""

from __future__ import annotations

import json

import numpy as np
import scipy.sparse as sp

from .errors import InvalidExponent, IoError, NonRegularGraph

MASS_TOL = 1e-12


class OrientedGraph:
    """Immutable finite graph with one canonical orientation per edge.

    Vertices are dense integers 0..n-1.  Edges are stored as parallel arrays
    (tails, heads) with tails < heads.
    """

    def __init__(self, n, edges, labels=None, validate=True):
        self.n = int(n)
        edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if validate and len(edges):
            if edges.min() < 0 or edges.max() >= self.n:
                raise ValueError("edge endpoint out of range")
            if np.any(edges[:, 0] == edges[:, 1]):
                raise ValueError("self-loops are not allowed")
            lo = edges.min(axis=1)
            hi = edges.max(axis=1)
            if np.any(edges[:, 0] > edges[:, 1]):
                raise ValueError("edges must be canonically oriented (x < y)")
            keys = lo * self.n + hi
            if len(np.unique(keys)) != len(keys):
                raise ValueError("duplicate edge (or both orientations present)")
        self.tails = np.ascontiguousarray(edges[:, 0])
        self.heads = np.ascontiguousarray(edges[:, 1])
        self.m = len(self.tails)
        self.labels = labels

        deg = np.zeros(self.n, dtype=np.int64)
        np.add.at(deg, self.tails, 1)
        np.add.at(deg, self.heads, 1)
        self.degrees = deg
        self.d_max = int(deg.max()) if self.n else 0

        # CSR adjacency: for vertex v, slice ptr[v]:ptr[v+1] of (nbr, edge, sign)
        order = np.argsort(np.concatenate([self.tails, self.heads]), kind="stable")
        ends = np.concatenate([self.tails, self.heads])[order]
        self._adj_nbr = np.concatenate([self.heads, self.tails])[order]
        self._adj_edge = np.concatenate(
            [np.arange(self.m), np.arange(self.m)])[order]
        self._adj_sign = np.concatenate(
            [np.ones(self.m, dtype=np.int8), -np.ones(self.m, dtype=np.int8)])[order]
        self._adj_ptr = np.zeros(self.n + 1, dtype=np.int64)
        np.cumsum(np.bincount(ends, minlength=self.n), out=self._adj_ptr[1:])

        self._A = None
        self._edge_index = None
        self._connected = None

    # -- structure ---------------------------------------------------------

    def neighbors(self, v):
        return self._adj_nbr[self._adj_ptr[v]:self._adj_ptr[v + 1]]

    def incident_edges(self, v):
        """Indices and signs (+1 tail, -1 head) of edges incident to v."""
        s = slice(self._adj_ptr[v], self._adj_ptr[v + 1])
        return self._adj_edge[s], self._adj_sign[s]

    @property
    def edge_index(self):
        """Map (x, y) canonical pair -> edge index.  Built on first use."""
        if self._edge_index is None:
            self._edge_index = {
                (int(x), int(y)): i
                for i, (x, y) in enumerate(zip(self.tails, self.heads))
            }
        return self._edge_index

    def adjacency_matrix(self):
        if self._A is None:
            data = np.ones(2 * self.m)
            rows = np.concatenate([self.tails, self.heads])
            cols = np.concatenate([self.heads, self.tails])
            self._A = sp.csr_matrix((data, (rows, cols)), shape=(self.n, self.n))
        return self._A

    def edge_lookup_matrix(self):
        """CSR matrix holding edge_index + 1 at both (x, y) and (y, x);
        supports vectorized edge-id lookup for vertex-pair arrays."""
        if getattr(self, "_elookup", None) is None:
            ids = np.arange(1, self.m + 1)
            rows = np.concatenate([self.tails, self.heads])
            cols = np.concatenate([self.heads, self.tails])
            self._elookup = sp.csr_matrix(
                (np.concatenate([ids, ids]), (rows, cols)),
                shape=(self.n, self.n))
        return self._elookup

    @property
    def regular_degree(self):
        """Common degree if the graph is regular, else None."""
        if self.n == 0:
            return None
        d = int(self.degrees[0])
        return d if np.all(self.degrees == d) else None

    def require_regular(self):
        d = self.regular_degree
        if d is None:
            raise NonRegularGraph("operation requires a regular graph")
        return d

    @property
    def is_connected(self):
        if self._connected is None:
            dist = bfs_distances(self, 0) if self.n else np.empty(0)
            self._connected = bool(self.n == 0 or np.all(dist >= 0))
        return self._connected

    def __repr__(self):
        return f"OrientedGraph(n={self.n}, m={self.m})"


def bfs_distances(G, sources):
    """Distances from the given source vertex/vertices; -1 if unreachable."""
    dist = np.full(G.n, -1, dtype=np.int64)
    frontier = np.atleast_1d(np.asarray(sources, dtype=np.int64))
    dist[frontier] = 0
    d = 0
    while len(frontier):
        d += 1
        nxt = []
        for v in frontier:
            nxt.append(G._adj_nbr[G._adj_ptr[v]:G._adj_ptr[v + 1]])
        cand = np.concatenate(nxt) if nxt else np.empty(0, dtype=np.int64)
        cand = cand[dist[cand] < 0]
        if not len(cand):
            break
        cand = np.unique(cand)
        dist[cand] = d
        frontier = cand
    return dist


# -- sparse-semantics fields (array backed) -------------------------------


class VertexField:
    """Real-valued function on vertices; zero outside its support."""

    __slots__ = ("graph", "a")

    def __init__(self, graph, values=None):
        self.graph = graph
        if values is None:
            self.a = np.zeros(graph.n)
        else:
            self.a = np.asarray(values, dtype=float)
            if self.a.shape != (graph.n,):
                raise ValueError("value array does not match vertex count")

    @classmethod
    def from_dict(cls, graph, mapping):
        f = cls(graph)
        for v, x in mapping.items():
            f.a[v] = x
        return f

    def __getitem__(self, v):
        return float(self.a[v])

    @property
    def support(self):
        return np.flatnonzero(self.a)

    def as_dict(self):
        return {int(v): float(self.a[v]) for v in self.support}

    def copy(self):
        return VertexField(self.graph, self.a.copy())

    def __add__(self, other):
        return VertexField(self.graph, self.a + other.a)

    def __sub__(self, other):
        return VertexField(self.graph, self.a - other.a)

    def __mul__(self, c):
        return VertexField(self.graph, self.a * float(c))

    __rmul__ = __mul__


class EdgeField:
    """Real-valued function on oriented edges; zero outside its support."""

    __slots__ = ("graph", "a")

    def __init__(self, graph, values=None):
        self.graph = graph
        if values is None:
            self.a = np.zeros(graph.m)
        else:
            self.a = np.asarray(values, dtype=float)
            if self.a.shape != (graph.m,):
                raise ValueError("value array does not match edge count")

    @classmethod
    def from_dict(cls, graph, mapping):
        f = cls(graph)
        idx = graph.edge_index
        for (x, y), val in mapping.items():
            if (x, y) in idx:
                f.a[idx[(x, y)]] = val
            elif (y, x) in idx:
                f.a[idx[(y, x)]] = -val
            else:
                raise KeyError(f"({x}, {y}) is not an edge")
        return f

    def __getitem__(self, pair):
        x, y = pair
        idx = self.graph.edge_index
        if (x, y) in idx:
            return float(self.a[idx[(x, y)]])
        if (y, x) in idx:
            return -float(self.a[idx[(y, x)]])
        return 0.0

    @property
    def support(self):
        return np.flatnonzero(self.a)

    def as_dict(self):
        return {
            (int(self.graph.tails[i]), int(self.graph.heads[i])): float(self.a[i])
            for i in self.support
        }

    def copy(self):
        return EdgeField(self.graph, self.a.copy())

    def __add__(self, other):
        return EdgeField(self.graph, self.a + other.a)

    def __sub__(self, other):
        return EdgeField(self.graph, self.a - other.a)

    def __mul__(self, c):
        return EdgeField(self.graph, self.a * float(c))

    __rmul__ = __mul__


class Distribution(VertexField):
    """Nonnegative vertex field of total mass one."""

    def __init__(self, graph, values=None, check=True):
        super().__init__(graph, values)
        if check and self.graph.n:
            if self.a.min() < -MASS_TOL:
                raise ValueError("distribution has negative mass")
            if abs(self.a.sum() - 1.0) > 1e-9:
                raise ValueError("distribution mass differs from 1")

    @classmethod
    def dirac(cls, graph, v):
        d = cls(graph, check=False)
        d.a[v] = 1.0
        return d

    @classmethod
    def uniform(cls, graph, vertices):
        vertices = np.asarray(vertices, dtype=np.int64)
        d = cls(graph, check=False)
        d.a[vertices] = 1.0 / len(vertices)
        return d

    @property
    def mass(self):
        return float(self.a.sum())


# -- operations ------------------------------------------------------------


def gradient(f, G=None):
    """(grad f)(x, y) = f(y) - f(x) on every oriented edge."""
    G = G or f.graph
    return EdgeField(G, f.a[G.heads] - f.a[G.tails])


def divergence(g, G=None):
    """Adjoint of the gradient: <div g, h> = <g, grad h>."""
    G = G or g.graph
    out = np.zeros(G.n)
    np.add.at(out, G.heads, g.a)
    np.subtract.at(out, G.tails, g.a)
    return VertexField(G, out)


def walk_operator(G, laziness=0.0):
    """Sparse matrix of the (lazy) simple random walk on a regular graph."""
    d = G.require_regular()
    P = G.adjacency_matrix() * ((1.0 - laziness) / d)
    if laziness:
        P = P + laziness * sp.identity(G.n, format="csr")
    return P


def laplacian(f, G=None):
    """Delta f = f - Pf = (1/d) div grad f on a regular graph."""
    G = G or f.graph
    d = G.require_regular()
    return VertexField(G, f.a - G.adjacency_matrix().dot(f.a) / d)


def walk_step(nu, G=None, laziness=0.0):
    """One step of the (lazy) simple random walk applied to a distribution."""
    G = G or nu.graph
    if not 0.0 <= laziness < 1.0:
        raise ValueError("laziness must lie in [0, 1)")
    d = G.require_regular()
    a = laziness * nu.a + (1.0 - laziness) * G.adjacency_matrix().dot(nu.a) / d
    return Distribution(G, a, check=False)


def lp_norm(field, p):
    """l^p norm; p=0 counts the support, p=inf is the max absolute value."""
    a = field.a if hasattr(field, "a") else np.asarray(field, dtype=float)
    if p == 0:
        return float(np.count_nonzero(a))
    if p == np.inf:
        return float(np.max(np.abs(a))) if len(a) else 0.0
    if p < 1:
        raise InvalidExponent(f"p={p} not in {{0}} | [1, inf]")
    if p == 1:
        return float(np.abs(a).sum())
    if p == 2:
        return float(np.sqrt((a * a).sum()))
    return float((np.abs(a) ** p).sum() ** (1.0 / p))


class SubsetView:
    """A vertex subset F with its edge boundary, outer boundary and
    induced edges precomputed."""

    __slots__ = ("graph", "members", "mask", "boundary_edges",
                 "induced_edges", "outer_boundary")

    def __init__(self, graph, members):
        self.graph = graph
        members = np.unique(np.asarray(list(members), dtype=np.int64))
        self.members = members
        mask = np.zeros(graph.n, dtype=bool)
        mask[members] = True
        self.mask = mask
        tin = mask[graph.tails]
        hin = mask[graph.heads]
        self.boundary_edges = np.flatnonzero(tin ^ hin)
        self.induced_edges = np.flatnonzero(tin & hin)
        outer = np.concatenate([
            graph.heads[self.boundary_edges][~hin[self.boundary_edges]],
            graph.tails[self.boundary_edges][~tin[self.boundary_edges]],
        ])
        self.outer_boundary = np.unique(outer)

    @property
    def size(self):
        return len(self.members)

    @property
    def boundary_size(self):
        return len(self.boundary_edges)

    def ratio(self):
        """Isoperimetric ratio |boundary| / |F|."""
        return self.boundary_size / self.size

    def induced_graph(self):
        """Graph induced on F, with vertices relabelled 0..|F|-1.

        Returns (graph, old_ids) where old_ids[i] is the original label.
        """
        remap = np.full(self.graph.n, -1, dtype=np.int64)
        remap[self.members] = np.arange(len(self.members))
        e = np.column_stack([
            remap[self.graph.tails[self.induced_edges]],
            remap[self.graph.heads[self.induced_edges]],
        ])
        # relabelling preserves order, so canonical orientation survives
        return OrientedGraph(len(self.members), e, validate=False), self.members


def subset_view(G, F):
    return SubsetView(G, F)


def ball(G, center, r):
    """BFS ball of radius r as a SubsetView."""
    if r < 0:
        raise ValueError("radius must be >= 0")
    dist = bfs_distances(G, center)
    return SubsetView(G, np.flatnonzero((0 <= dist) & (dist <= r)))


# -- builtin graph families ------------------------------------------------


def cycle_graph(n):
    if n < 3:
        raise ValueError("cycle needs n >= 3")
    e = [(i, i + 1) for i in range(n - 1)] + [(0, n - 1)]
    return OrientedGraph(n, e)


def path_graph(n):
    return OrientedGraph(n, [(i, i + 1) for i in range(n - 1)])


def complete_graph(n):
    return OrientedGraph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def hypercube_graph(d):
    n = 1 << d
    e = []
    for v in range(n):
        for b in range(d):
            w = v ^ (1 << b)
            if v < w:
                e.append((v, w))
    return OrientedGraph(n, e)


def torus_grid(w, h):
    """Discrete 2-torus C_w x C_h; 4-regular, needs w, h >= 3."""
    if w < 3 or h < 3:
        raise ValueError("torus grid needs both sides >= 3")
    def vid(i, j):
        return (i % w) * h + (j % h)
    e = set()
    for i in range(w):
        for j in range(h):
            for ni, nj in ((i + 1, j), (i, j + 1)):
                a, b = vid(i, j), vid(ni, nj)
                e.add((min(a, b), max(a, b)))
    return OrientedGraph(w * h, sorted(e))


def regular_tree(d, depth):
    """Finite truncation of the d-regular tree; root 0, leaves at `depth`."""
    edges = []
    nxt = 1
    frontier = [0]
    for level in range(depth):
        newf = []
        for v in frontier:
            k = d if level == 0 else d - 1
            for _ in range(k):
                edges.append((v, nxt))
                newf.append(nxt)
                nxt += 1
        frontier = newf
    return OrientedGraph(nxt, edges)


def random_regular_graph(d, n, seed):
    import networkx as nx
    g = nx.random_regular_graph(d, n, seed=seed)
    if not nx.is_connected(g):
        raise ValueError("sampled regular graph is disconnected; change seed")
    e = [(min(u, v), max(u, v)) for u, v in g.edges()]
    return OrientedGraph(n, sorted(e))


# -- file format -----------------------------------------------------------


def save_graph(G, path):
    obj = {"vertices": G.n,
           "edges": [[int(x), int(y)] for x, y in zip(G.tails, G.heads)]}
    if G.labels is not None:
        obj["labels"] = G.labels
    with open(path, "w") as fh:
        json.dump(obj, fh)


def load_graph(path):
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise IoError(f"cannot read graph file {path}: {exc}") from exc
    try:
        G = OrientedGraph(obj["vertices"], obj["edges"],
                          labels=obj.get("labels"))
    except (KeyError, ValueError) as exc:
        raise IoError(f"invalid graph file {path}: {exc}") from exc
    if not G.is_connected:
        raise IoError(f"graph in {path} is not connected")
    return G

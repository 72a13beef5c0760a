"""Truncated Cayley graphs of concrete finitely generated groups.

Each group handle carries exact-arithmetic normal forms (integer tuples,
reduced words, rational affine maps) so element hashing is collision free.
Balls are built by breadth-first search from the identity; vertex ids are
assigned in discovery order, so word length is nondecreasing in the id and
the canonical x < y edge orientation points away from the identity or
within a sphere.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .errors import BallTooLarge, PathExitsBall, UnsupportedGroup
from .graphs import OrientedGraph

DEFAULT_BALL_CAP = 2_000_000


class Generator:
    """A named generator: `name` is direction specific, `label` is shared
    with the inverse (edges are labelled by the unordered pair)."""

    __slots__ = ("name", "label", "element")

    def __init__(self, name, label, element):
        self.name = name
        self.label = label
        self.element = element

    def __repr__(self):
        return f"Generator({self.name})"


class GroupHandle:
    """Multiplication, inversion and a symmetric generating set."""

    kind = "abstract"

    def __init__(self):
        self.generators = []
        self._by_name = {}

    def _add_gen_pair(self, label, element, involution=False):
        self.generators.append(Generator(label, label, element))
        self._by_name[label] = self.generators[-1]
        if not involution:
            inv = Generator(label + "'", label, self.inverse(element))
            self.generators.append(inv)
            self._by_name[inv.name] = inv

    def gen(self, name):
        return self._by_name[name]

    @property
    def degree(self):
        return len(self.generators)

    def multiply(self, g, h):
        raise NotImplementedError

    def inverse(self, g):
        raise NotImplementedError

    @property
    def identity(self):
        raise NotImplementedError

    def word(self, names):
        """Generator list for a word given by direction-specific names."""
        return [self._by_name[n] for n in names]

    def evaluate(self, gens):
        g = self.identity
        for s in gens:
            g = self.multiply(g, s.element)
        return g


class FreeAbelian(GroupHandle):
    """Z^d with the standard generators."""

    def __init__(self, d):
        super().__init__()
        self.kind = f"zd:{d}"
        self.d = d
        for i in range(d):
            e = tuple(1 if j == i else 0 for j in range(d))
            self._add_gen_pair(f"s{i + 1}", e)

    @property
    def identity(self):
        return (0,) * self.d

    def multiply(self, g, h):
        return tuple(a + b for a, b in zip(g, h))

    def inverse(self, g):
        return tuple(-a for a in g)


class FreeGroup(GroupHandle):
    """Free group F_k; elements are reduced words over {+-1..+-k}."""

    def __init__(self, k):
        super().__init__()
        self.kind = f"free:{k}"
        self.k = k
        for i in range(1, k + 1):
            self._add_gen_pair(f"s{i}", (i,))

    @property
    def identity(self):
        return ()

    def multiply(self, g, h):
        g = list(g)
        i = 0
        while g and i < len(h) and g[-1] == -h[i]:
            g.pop()
            i += 1
        return tuple(g) + tuple(h[i:])

    def inverse(self, g):
        return tuple(-a for a in reversed(g))


class Lamplighter(GroupHandle):
    """Wreath product C_q wr Z^d.  Elements are (lamps, cursor) with lamps a
    sorted tuple of (position, value mod q) pairs, value != 0."""

    def __init__(self, q, d):
        super().__init__()
        self.kind = f"lamplighter:{q},{d}"
        self.q = q
        self.d = d
        for i in range(d):
            step = tuple(1 if j == i else 0 for j in range(d))
            self._add_gen_pair(f"t{i + 1}", ((), step))
        zero = (0,) * d
        self._add_gen_pair("s", (((zero, 1 % q),), zero), involution=(q == 2))

    @property
    def identity(self):
        return ((), (0,) * self.d)

    def multiply(self, g, h):
        lamps_g, cur_g = g
        lamps_h, cur_h = h
        acc = dict(lamps_g)
        for pos, val in lamps_h:
            p = tuple(a + b for a, b in zip(cur_g, pos))
            v = (acc.get(p, 0) + val) % self.q
            if v:
                acc[p] = v
            else:
                acc.pop(p, None)
        cur = tuple(a + b for a, b in zip(cur_g, cur_h))
        return (tuple(sorted(acc.items())), cur)

    def inverse(self, g):
        lamps, cur = g
        neg = tuple(
            sorted((tuple(a - b for a, b in zip(pos, cur)), (-val) % self.q)
                   for pos, val in lamps))
        return (neg, tuple(-a for a in cur))


class Heisenberg(GroupHandle):
    """Integer Heisenberg group as triples (a, b, c) with
    (a,b,c)(a',b',c') = (a+a', b+b', c+c'+a b')."""

    def __init__(self):
        super().__init__()
        self.kind = "heisenberg"
        self._add_gen_pair("s1", (1, 0, 0))
        self._add_gen_pair("s2", (0, 1, 0))

    @property
    def identity(self):
        return (0, 0, 0)

    def multiply(self, g, h):
        return (g[0] + h[0], g[1] + h[1], g[2] + h[2] + g[0] * h[1])

    def inverse(self, g):
        return (-g[0], -g[1], g[0] * g[1] - g[2])

    def central_word(self):
        """Word for the central commutator [x, y]; follows x y x' y'."""
        return self.word(["s1", "s2", "s1'", "s2'"])


class BaumslagSolitar(GroupHandle):
    """BS(1, n) = <a, t | t a t^-1 = a^n> as affine maps (r, e) acting by
    u -> r + n^e u, with r an exact rational."""

    def __init__(self, n):
        super().__init__()
        if n < 2:
            raise UnsupportedGroup("bs(1,n) needs n >= 2")
        self.kind = f"bs:1,{n}"
        self.n = n
        self._add_gen_pair("a", (Fraction(1), 0))
        self._add_gen_pair("t", (Fraction(0), 1))

    @property
    def identity(self):
        return (Fraction(0), 0)

    def multiply(self, g, h):
        return (g[0] + Fraction(self.n) ** g[1] * h[0], g[1] + h[1])

    def inverse(self, g):
        return (-(Fraction(self.n) ** -g[1]) * g[0], -g[1])


class InfiniteDihedral(GroupHandle):
    """D_inf as pairs (k, eps): translation part and reflection bit."""

    def __init__(self):
        super().__init__()
        self.kind = "dinf"
        self._add_gen_pair("t", (1, 0))
        self._add_gen_pair("s", (0, 1), involution=True)

    @property
    def identity(self):
        return (0, 0)

    def multiply(self, g, h):
        return (g[0] + (h[0] if g[1] == 0 else -h[0]), g[1] ^ h[1])

    def inverse(self, g):
        return (-g[0] if g[1] == 0 else g[0], g[1])


def build_group(spec):
    """Parse a group spec string like "zd:2", "free:2", "lamplighter:2,1",
    "heisenberg", "bs:1,2", "dinf"."""
    head, _, args = spec.partition(":")
    try:
        if head == "zd":
            return FreeAbelian(int(args))
        if head == "free":
            return FreeGroup(int(args))
        if head == "lamplighter":
            q, d = (int(a) for a in args.split(","))
            return Lamplighter(q, d)
        if head == "heisenberg":
            return Heisenberg()
        if head == "bs":
            one, n = (int(a) for a in args.split(","))
            if one != 1:
                raise UnsupportedGroup("only bs(1,n) is supported")
            return BaumslagSolitar(n)
        if head == "dinf":
            return InfiniteDihedral()
    except (ValueError, TypeError) as exc:
        raise UnsupportedGroup(f"malformed group spec {spec!r}") from exc
    raise UnsupportedGroup(f"unknown group kind {head!r}")


class CayleyBall:
    """Radius-R ball of a Cayley graph, truncated to its vertex set.

    graph: OrientedGraph; elements[i] is the canonical form of vertex i;
    word_length[i] its distance to the identity; edge_labels[j] the shared
    generator label of edge j; interior marks word_length < R.
    """

    def __init__(self, group, graph, elements, word_length, radius,
                 edge_labels):
        self.group = group
        self.graph = graph
        self.elements = elements
        self.vertex_of = {g: i for i, g in enumerate(elements)}
        self.word_length = word_length
        self.radius = radius
        self.edge_labels = edge_labels
        self.interior = word_length < radius

    @property
    def n(self):
        return self.graph.n

    @property
    def identity_vertex(self):
        return 0

    def sphere(self, r):
        return np.flatnonzero(self.word_length == r)

    def translation_table(self, gen):
        """Array t with t[i] = vertex of elements[i] * gen, or -1 if that
        product lies outside the ball.  Cached per generator name."""
        if not hasattr(self, "_ttables"):
            self._ttables = {}
        t = self._ttables.get(gen.name)
        if t is None:
            mul = self.group.multiply
            s = gen.element
            t = np.fromiter(
                (self.vertex_of.get(mul(g, s), -1) for g in self.elements),
                dtype=np.int64, count=len(self.elements))
            self._ttables[gen.name] = t
        return t

    def edges_with_label(self, label):
        lab = np.asarray(self.edge_labels)
        return np.flatnonzero(lab == label)


def cayley_ball(group, R, cap=DEFAULT_BALL_CAP):
    """BFS ball of radius R around the identity."""
    if R < 1:
        raise ValueError("radius must be >= 1")
    elements = [group.identity]
    index = {group.identity: 0}
    wl = [0]
    edges = []
    labels = []
    frontier = [group.identity]
    for depth in range(1, R + 1):
        nxt = []
        for g in frontier:
            gi = index[g]
            for s in group.generators:
                h = group.multiply(g, s.element)
                hi = index.get(h)
                if hi is None:
                    hi = len(elements)
                    if hi >= cap:
                        raise BallTooLarge(
                            f"ball of radius {R} exceeds cap {cap}")
                    index[h] = hi
                    elements.append(h)
                    wl.append(depth)
                    nxt.append(h)
                # each edge is recorded from its lower-id endpoint only;
                # BFS order guarantees that endpoint enumerates it
                if gi < hi:
                    edges.append((gi, hi))
                    labels.append(s.label)
        frontier = nxt
        if not frontier:
            break
    # edges inside the outermost sphere are not seen by the loop above
    for g in frontier:
        gi = index[g]
        for s in group.generators:
            hi = index.get(group.multiply(g, s.element))
            if hi is not None and gi < hi:
                edges.append((gi, hi))
                labels.append(s.label)
    # dedupe (multi-edges between normal forms collapse to one edge)
    edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    labels = np.asarray(labels)
    if len(edges):
        key = edges[:, 0] * len(elements) + edges[:, 1]
        _, keep = np.unique(key, return_index=True)
        edges = edges[keep]
        labels = labels[keep]
    graph = OrientedGraph(len(elements), edges, validate=False)
    return CayleyBall(group, graph, elements, np.asarray(wl, dtype=np.int64),
                      R, labels)


def path_of_element(ball, word, basepoint=0):
    """Edge path from `basepoint` following the generator word.

    word: sequence of Generator objects (see GroupHandle.word).
    Returns (vertices, edge_steps) where edge_steps is a list of
    (edge_index, sign): sign +1 if the step traverses the edge in its
    canonical orientation, -1 otherwise.
    """
    g = ball.elements[basepoint]
    verts = [basepoint]
    steps = []
    cur = basepoint
    for s in word:
        g = ball.group.multiply(g, s.element)
        nxt = ball.vertex_of.get(g)
        if nxt is None:
            raise PathExitsBall(
                f"path left the radius-{ball.radius} ball")
        a, b = (cur, nxt) if cur < nxt else (nxt, cur)
        e = ball.graph.edge_index.get((a, b))
        if e is None:
            raise PathExitsBall("step is not an edge of the ball")
        steps.append((e, 1 if cur < nxt else -1))
        verts.append(nxt)
        cur = nxt
    return verts, steps

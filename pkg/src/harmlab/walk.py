"""Random walks: stopped walks, exit distributions, firing, entropy and
Green partial sums.

Walks on Cayley balls use the ambient group degree, so distributions are
faithful as long as their support stays in the interior; operations that
would touch the truncation sphere raise SupportHitsBoundary instead of
silently leaking mass.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import (MaxNormTooLarge, NegativeMass, SingularSystem,
                     SupportHitsBoundary)
from .graphs import Distribution, EdgeField, VertexField, gradient, lp_norm

INTERIOR_RESIDUAL = 1e-12


class StoppedWalk:
    """Simple walk frozen outside the region A: mass at a vertex of A moves
    uniformly to its neighbours, mass elsewhere is a fixed point."""

    def __init__(self, G, A):
        self.graph = G
        self.region = A
        rows = []
        cols = []
        data = []
        for x in A.members:
            ej, _ = G.incident_edges(x)
            w = 1.0 / len(ej)
            for e in ej:
                y = G.tails[e] if G.heads[e] == x else G.heads[e]
                rows.append(y)
                cols.append(x)
                data.append(w)
        keep = np.setdiff1d(np.arange(G.n), A.members)
        rows.extend(keep)
        cols.extend(keep)
        data.extend(np.ones(len(keep)))
        self.P = sp.csr_matrix((data, (rows, cols)), shape=(G.n, G.n))

    def step(self, nu):
        return Distribution(self.graph, self.P.dot(nu.a), check=False)


class ExitDistribution(Distribution):
    """Law of the first vertex outside A hit by a walk started at origin."""

    def __init__(self, graph, values, origin, region):
        super().__init__(graph, values, check=False)
        self.origin = origin
        self.region = region


def _interior_solve(G, A, v):
    """Expected visit counts h with h = delta_v + Q^T h on the interior."""
    members = A.members
    k = len(members)
    pos = {int(x): i for i, x in enumerate(members)}
    deg = G.degrees[members].astype(float)
    rows, cols, data = [], [], []
    for i, x in enumerate(members):
        ej, _ = G.incident_edges(x)
        for e in ej:
            y = int(G.tails[e]) if G.heads[e] == x else int(G.heads[e])
            j = pos.get(y)
            if j is not None:
                # visits flow x -> y with probability 1/deg(x)
                rows.append(j)
                cols.append(i)
                data.append(1.0 / deg[i])
    Q = sp.csr_matrix((data, (rows, cols)), shape=(k, k))
    b = np.zeros(k)
    b[pos[int(v)]] = 1.0
    M = sp.identity(k, format="csr") - Q
    if np.all(deg == deg[0]):
        h, info = spla.cg(M, b, rtol=1e-14, atol=0.0, maxiter=20 * k + 100)
        if info != 0:
            h = spla.spsolve(M.tocsc(), b)
    else:
        h = spla.spsolve(M.tocsc(), b)
    if not np.all(np.isfinite(h)):
        raise SingularSystem("absorbing solve failed; region may not reach "
                             "its boundary")
    return h, pos, deg


def exit_distribution(G, A, v):
    """Exact absorbing-chain exit law from v through the region A."""
    if not A.mask[v]:
        raise ValueError("origin must lie inside the region")
    if len(A.outer_boundary) == 0:
        raise SingularSystem("region has no outer boundary")
    h, pos, deg = _interior_solve(G, A, v)
    out = np.zeros(G.n)
    for e in A.boundary_edges:
        x, y = int(G.tails[e]), int(G.heads[e])
        if A.mask[x]:
            out[y] += h[pos[x]] / deg[pos[x]]
        else:
            out[x] += h[pos[y]] / deg[pos[y]]
    total = out.sum()
    if abs(total - 1.0) > 1e-9:
        raise SingularSystem(f"exit mass {total} differs from 1")
    return ExitDistribution(G, out, origin=v, region=A)


def fire(nu, v, r, signed=False):
    """Replace r units of mass at v by one walk step from v:
    result = nu - r delta_v + r P delta_v.  Preserves pairings with
    functions harmonic at v."""
    if r < 0:
        raise ValueError("firing rate must be >= 0")
    if not signed and r > nu.a[v] + 1e-12:
        raise NegativeMass(f"firing {r} exceeds mass {nu.a[v]} at vertex {v}")
    G = nu.graph
    a = nu.a.copy()
    a[v] -= r
    ej, _ = G.incident_edges(v)
    w = r / len(ej)
    for e in ej:
        y = G.tails[e] if G.heads[e] == v else G.heads[e]
        a[y] += w
    return Distribution(G, a, check=False)


# -- entropy ---------------------------------------------------------------


def entropy(mu):
    """Shannon entropy with the convention 0 ln 0 = 0."""
    a = mu.a[mu.a > 0]
    return float(-(a * np.log(a)).sum() + 0.0)


def renyi(mu, q):
    """Renyi entropy H_q; H_0 counts the support, H_1 is Shannon,
    H_inf is minus the log of the largest atom."""
    if q < 0:
        raise ValueError("q must be >= 0")
    if q == 0:
        return float(np.log(np.count_nonzero(mu.a)))
    if q == 1:
        return entropy(mu)
    if q == np.inf:
        return float(-np.log(mu.a.max()))
    a = mu.a[mu.a > 0]
    return float(np.log((a ** q).sum()) / (1.0 - q))


def speed(mu, word_length):
    """Expected word length under mu."""
    return float(np.dot(mu.a, word_length))


def entropy_isoperimetry_check(f, nu, K):
    """Both sides of the gradient-entropy inequality
    ||grad f||_1 >= (K nu/(nu+1)) H(f)^{-1/nu} for a distribution with
    all atoms <= 1/e."""
    if f.a.max() > np.exp(-1.0) + 1e-15:
        raise MaxNormTooLarge("inequality requires ||f||_inf <= 1/e")
    lhs = lp_norm(gradient(f), 1)
    H = entropy(f)
    rhs = (K * nu / (nu + 1.0)) * H ** (-1.0 / nu)
    return lhs, rhs, bool(lhs >= rhs)


# -- walks on Cayley balls -------------------------------------------------


def _ball_step(ball, a, laziness):
    d = ball.group.degree
    out = ball.graph.adjacency_matrix().dot(a) / d
    if laziness:
        out = laziness * a + (1.0 - laziness) * out
    return out


def _check_interior(ball, a, need_margin=0):
    wl = ball.word_length[np.flatnonzero(a)]
    if len(wl) and wl.max() > ball.radius - 1 - need_margin:
        raise SupportHitsBoundary(
            "distribution support reached the truncation sphere; "
            "increase the ball radius")


def distribution(ball, n, laziness=0.0):
    """P^n applied to the Dirac at the identity of a Cayley ball."""
    a = np.zeros(ball.n)
    a[ball.identity_vertex] = 1.0
    for _ in range(n):
        _check_interior(ball, a)
        a = _ball_step(ball, a, laziness)
    _check_interior(ball, a, need_margin=-1)
    return Distribution(ball.graph, a, check=False)


def green_partial(ball, x, n, laziness=0.0):
    """Partial Green sum g_n = (1/n) sum_{i<n} P^i delta_x and the l^1 norm
    of its Laplacian (which contracts like 2/n)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    a = np.zeros(ball.n)
    a[x] = 1.0
    acc = np.zeros(ball.n)
    for _ in range(n - 1):
        acc += a
        _check_interior(ball, a)
        a = _ball_step(ball, a, laziness)
    acc += a
    _check_interior(ball, a, need_margin=-1)
    g = acc / n
    residual = np.abs(g - _ball_step(ball, g, laziness)).sum()
    return Distribution(ball.graph, g, check=False), float(residual)


def gradient_l1_profile(ball, N, laziness=0.0):
    """Sequences ||grad P^n||_1 and ||grad g_n||_1 for n = 1..N."""
    grad_p = []
    grad_g = []
    a = np.zeros(ball.n)
    a[ball.identity_vertex] = 1.0
    acc = a.copy()
    for n in range(1, N + 1):
        _check_interior(ball, a, need_margin=1)
        a = _ball_step(ball, a, laziness)
        acc += a
        grad_p.append(lp_norm(gradient(VertexField(ball.graph, a)), 1))
        g = acc / (n + 1)
        grad_g.append(lp_norm(gradient(VertexField(ball.graph, g)), 1))
    return np.array(grad_p), np.array(grad_g)


def entropy_profile(ball, N, laziness=0.5):
    """Per-step table of entropies, speed, gradient norm and return
    probability for the walk started at the identity."""
    a = np.zeros(ball.n)
    a[ball.identity_vertex] = 1.0
    rows = []
    for n in range(N + 1):
        mu = Distribution(ball.graph, a, check=False)
        rows.append({
            "n": n,
            "H0": renyi(mu, 0),
            "H1": entropy(mu),
            "H2": renyi(mu, 2),
            "Hinf": renyi(mu, np.inf),
            "speed": speed(mu, ball.word_length),
            "grad_l1": lp_norm(gradient(mu), 1),
            "return_prob": float(a[ball.identity_vertex]),
        })
        if n < N:
            _check_interior(ball, a)
            a = _ball_step(ball, a, laziness)
    return rows


class RadialTreeWalk:
    """Simple walk on the infinite d-regular tree reduced to its radial
    birth-death chain.  Level k holds c_k = d (d-1)^{k-1} vertices; the
    walk moves inward with probability 1/d and outward with (d-1)/d.

    Exact up to float rounding for any horizon, with no truncated ball.
    """

    def __init__(self, d, horizon):
        self.d = d
        self.horizon = horizon
        self.m = np.zeros(horizon + 2)
        self.m[0] = 1.0
        self.counts = np.concatenate(
            [[1.0], d * (d - 1.0) ** np.arange(horizon + 1)])

    def step(self):
        d = self.d
        m = self.m
        new = np.zeros_like(m)
        new[1] += m[0]
        new[0] += m[1] / d
        new[1:-1] += m[2:] / d
        new[2:] += m[1:-1] * ((d - 1.0) / d)
        self.m = new

    def values(self, masses=None):
        """Per-vertex value at each level."""
        m = self.m if masses is None else masses
        return m / self.counts

    def laplacian_l1(self, masses):
        """||Delta g||_1 for the radial function with given level masses."""
        d = self.d
        val = self.values(masses)
        res = np.zeros_like(val)
        res[0] = val[0] - val[1]
        res[1:-1] = val[1:-1] - (val[:-2] + (d - 1.0) * val[2:]) / d
        return float(np.abs(res[:-1] * self.counts[:-1]).sum())

    def green_residuals(self, n_max):
        """||Delta g_n||_1 for n = 1..n_max (needs horizon >= n_max + 1)."""
        if self.horizon < n_max + 1:
            raise SupportHitsBoundary("horizon too small for this n")
        acc = self.m.copy()
        out = []
        for n in range(1, n_max + 1):
            out.append(self.laplacian_l1(acc / n))
            self.step()
            acc += self.m
        return np.array(out)

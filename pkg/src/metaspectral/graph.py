"""Immutable weighted undirected graphs and their combinatorial quantities.

Vertices are the integers ``0..n-1``. Edges are stored once with ``u < v``
and mirrored into a symmetric CSR adjacency matrix for products.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components
from scipy.sparse.linalg import LinearOperator

from .errors import (
    DuplicateEdge,
    EmptySet,
    FullSet,
    InvalidK,
    IsolatedVertex,
    NegativeWeight,
    SelfLoop,
    TooLarge,
    VertexOutOfRange,
)

DENSE_LIMIT = 4096
BRUTE_FORCE_LIMIT = 14


@dataclass(frozen=True, eq=False)
class WeightedGraph:
    """Simple undirected graph with strictly positive edge weights.

    Build instances with :func:`build_graph`; the constructor trusts its
    arguments.
    """

    n: int
    src: np.ndarray
    dst: np.ndarray
    weight: np.ndarray
    degree: np.ndarray
    adjacency: sp.csr_matrix = field(repr=False)

    @property
    def total_volume(self) -> float:
        return float(self.degree.sum())

    @property
    def num_edges(self) -> int:
        return int(self.src.size)

    def edges(self):
        """Iterate over ``(u, v, w)`` with ``u < v``."""
        for u, v, w in zip(self.src.tolist(), self.dst.tolist(), self.weight.tolist()):
            yield u, v, w

    def mask(self, vertices) -> np.ndarray:
        """Boolean membership mask for a vertex set given as indices or a mask."""
        arr = np.asarray(vertices)
        if arr.dtype == bool:
            if arr.shape != (self.n,):
                raise ValueError(f"mask must have shape ({self.n},)")
            return arr.copy()
        out = np.zeros(self.n, dtype=bool)
        if arr.size:
            idx = arr.astype(np.int64).ravel()
            if idx.min() < 0 or idx.max() >= self.n:
                raise VertexOutOfRange(f"vertex ids must lie in [0, {self.n})")
            out[idx] = True
        return out

    def volume(self, vertices) -> float:
        return float(self.degree[self.mask(vertices)].sum())

    def cut(self, S, T=None) -> float:
        """Total weight of edges with one endpoint in ``S`` and the other in ``T``.

        ``T`` defaults to the complement of ``S``.
        """
        s = self.mask(S)
        t = ~s if T is None else self.mask(T)
        a = s[self.src] & t[self.dst]
        b = t[self.src] & s[self.dst]
        # an edge inside S & T is counted once
        return float(self.weight[a | b].sum())

    def internal_weight(self, vertices) -> float:
        s = self.mask(vertices)
        return float(self.weight[s[self.src] & s[self.dst]].sum())

    def conductance(self, vertices) -> float:
        return conductance(self, vertices)

    def num_components(self) -> int:
        return int(connected_components(self.adjacency, directed=False)[0])

    def dense_adjacency(self) -> np.ndarray:
        if self.n > DENSE_LIMIT:
            raise TooLarge(f"dense materialisation refused for n={self.n} > {DENSE_LIMIT}")
        return self.adjacency.toarray()

    def normalized_laplacian(self) -> "NormalizedLaplacian":
        return NormalizedLaplacian(self)


def build_graph(edge_list, n: int | None = None) -> WeightedGraph:
    """Validate an edge list and build a :class:`WeightedGraph`.

    ``edge_list`` is an iterable of ``(u, v, w)`` triples or an ``(m, 3)``
    array. Zero-weight edges are dropped; duplicates (in either orientation),
    self-loops, negative weights and isolated vertices are rejected. ``n``
    defaults to the largest vertex id plus one.
    """
    arr = np.asarray(list(edge_list) if not isinstance(edge_list, np.ndarray) else edge_list,
                     dtype=float)
    if arr.size == 0:
        arr = arr.reshape(0, 3)
    if arr.ndim != 2 or arr.shape[1] != 3:
        raise ValueError("edge_list must contain (u, v, w) triples")
    u = arr[:, 0]
    v = arr[:, 1]
    w = arr[:, 2]
    if np.any(u != np.floor(u)) or np.any(v != np.floor(v)):
        raise ValueError("vertex ids must be integers")
    u = u.astype(np.int64)
    v = v.astype(np.int64)
    if u.size and (min(u.min(), v.min()) < 0):
        raise VertexOutOfRange("vertex ids must be non-negative")
    inferred = int(max(u.max(), v.max())) + 1 if u.size else 0
    if n is None:
        n = inferred
    elif inferred > n:
        raise VertexOutOfRange(f"vertex id {inferred - 1} out of range for n={n}")
    if n < 1:
        raise ValueError("graph must have at least one vertex")
    if not np.all(np.isfinite(w)):
        raise ValueError("edge weights must be finite")
    bad = np.flatnonzero(w < 0)
    if bad.size:
        i = int(bad[0])
        raise NegativeWeight(f"edge ({u[i]}, {v[i]}) has negative weight {w[i]}")
    loops = np.flatnonzero(u == v)
    if loops.size:
        raise SelfLoop(f"self-loop at vertex {u[loops[0]]}")

    lo = np.minimum(u, v)
    hi = np.maximum(u, v)
    key = lo * n + hi
    order = np.argsort(key, kind="stable")
    dup = np.flatnonzero(np.diff(key[order]) == 0)
    if dup.size:
        i = int(order[dup[0]])
        raise DuplicateEdge(f"edge ({lo[i]}, {hi[i]}) appears more than once")

    keep = w > 0
    lo, hi, w = lo[keep], hi[keep], w[keep]
    order = np.lexsort((hi, lo))
    lo, hi, w = lo[order], hi[order], w[order]

    adjacency = sp.coo_matrix(
        (np.concatenate([w, w]), (np.concatenate([lo, hi]), np.concatenate([hi, lo]))),
        shape=(n, n),
    ).tocsr()
    adjacency.sum_duplicates()
    degree = np.zeros(n)
    np.add.at(degree, lo, w)
    np.add.at(degree, hi, w)
    isolated = np.flatnonzero(degree <= 0)
    if isolated.size:
        raise IsolatedVertex(f"vertex {isolated[0]} has no incident weight")

    for a in (lo, hi, w, degree):
        a.setflags(write=False)
    return WeightedGraph(n=int(n), src=lo, dst=hi, weight=w, degree=degree, adjacency=adjacency)


def conductance(G: WeightedGraph, vertices) -> float:
    """Crossing weight ``w(S, V \\ S)`` divided by ``vol(S)``."""
    s = G.mask(vertices)
    size = int(s.sum())
    if size == 0:
        raise EmptySet("conductance is undefined for the empty set")
    if size == G.n:
        raise FullSet("conductance of the full vertex set is not defined")
    crossing = s[G.src] != s[G.dst]
    return float(G.weight[crossing].sum() / G.degree[s].sum())


class NormalizedLaplacian:
    """Operator view of ``I - D^{-1/2} A D^{-1/2}``."""

    def __init__(self, G: WeightedGraph):
        self.graph = G
        self.n = G.n
        self.inv_sqrt_degree = 1.0 / np.sqrt(G.degree)
        d = sp.diags(self.inv_sqrt_degree)
        self.normalized_adjacency = (d @ G.adjacency @ d).tocsr()

    @property
    def shape(self):
        return (self.n, self.n)

    def matvec(self, x):
        x = np.asarray(x, dtype=float)
        return x - self.normalized_adjacency @ x

    __matmul__ = matvec

    def quadratic_form(self, x) -> float:
        x = np.asarray(x, dtype=float)
        return float(x @ self.matvec(x))

    def to_dense(self) -> np.ndarray:
        if self.n > DENSE_LIMIT:
            raise TooLarge(f"dense materialisation refused for n={self.n} > {DENSE_LIMIT}")
        return np.eye(self.n) - self.normalized_adjacency.toarray()

    def as_linear_operator(self) -> LinearOperator:
        return LinearOperator(self.shape, matvec=self.matvec, matmat=self.matvec,
                              rmatvec=self.matvec, dtype=float)


def normalized_laplacian(G: WeightedGraph) -> NormalizedLaplacian:
    return NormalizedLaplacian(G)


def _subset_tables(G: WeightedGraph):
    """Volume and conductance of every vertex subset, indexed by bitmask."""
    n = G.n
    W = G.dense_adjacency()
    size = 1 << n
    internal = np.zeros(size)
    vol = np.zeros(size)
    for v in range(n):
        lo, hi = 1 << v, 1 << (v + 1)
        rest = np.arange(lo, dtype=np.int64)
        if v:
            bits = (rest[:, None] >> np.arange(v)) & 1
            to_v = bits @ W[:v, v]
        else:
            to_v = np.zeros(1)
        internal[lo:hi] = internal[:lo] + to_v
        vol[lo:hi] = vol[:lo] + G.degree[v]
    with np.errstate(divide="ignore", invalid="ignore"):
        phi = (vol - 2.0 * internal) / vol
    phi[0] = np.inf
    return vol, phi


def k_way_expansion_bruteforce(G: WeightedGraph, k: int):
    """Exact ``rho(k)``: min over k-way partitions of the max block conductance.

    Exhaustive search over set partitions with branch-and-bound on the running
    maximum. Returns ``(rho, labels)`` where ``labels`` is an achieving
    partition as an integer array.
    """
    n = G.n
    if n > BRUTE_FORCE_LIMIT:
        raise TooLarge(f"brute force limited to n <= {BRUTE_FORCE_LIMIT}, got {n}")
    if not 2 <= k <= n:
        raise InvalidK(f"k must satisfy 2 <= k <= n, got k={k}, n={n}")
    _, phi = _subset_tables(G)
    full = (1 << n) - 1
    best = [np.inf, None]

    def submasks_with_low(rest):
        # every non-empty submask of rest that contains rest's lowest set bit
        low = rest & -rest
        others = rest ^ low
        sub = others
        while True:
            yield sub | low
            if sub == 0:
                break
            sub = (sub - 1) & others

    def search(rest, blocks_left, current, chosen):
        if blocks_left == 1:
            val = max(current, phi[rest])
            if val < best[0]:
                best[0] = val
                best[1] = chosen + [rest]
            return
        for block in submasks_with_low(rest):
            remaining = rest ^ block
            if remaining == 0 or bin(remaining).count("1") < blocks_left - 1:
                continue
            val = max(current, phi[block])
            if val >= best[0]:
                continue
            search(remaining, blocks_left - 1, val, chosen + [block])

    search(full, k, 0.0, [])
    labels = np.empty(n, dtype=np.int64)
    for i, block in enumerate(best[1]):
        for v in range(n):
            if block >> v & 1:
                labels[v] = i
    return float(best[0]), labels


def graph_conductance_bruteforce(G: WeightedGraph) -> float:
    """Min conductance over non-empty sets with ``vol(S) <= vol(V)/2``."""
    if G.n > BRUTE_FORCE_LIMIT:
        raise TooLarge(f"brute force limited to n <= {BRUTE_FORCE_LIMIT}, got {G.n}")
    vol, phi = _subset_tables(G)
    ok = (vol <= G.total_volume / 2) & (vol > 0)
    return float(phi[ok].min())

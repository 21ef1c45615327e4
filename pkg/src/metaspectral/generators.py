"""Meta-graph templates and stochastic block models that follow them.

Randomness comes from numpy's ``PCG64`` bit generator (``numpy.random.default_rng``),
so a given seed yields the same graph on every platform and numpy >= 1.17.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import BadParams, DegenerateProbabilities, TooManyRetries
from .graph import WeightedGraph, build_graph
from .metagraph import MetaGraph, meta_graph_from_edges
from .pipeline import Clustering

MAX_REPAIR_ROUNDS = 10


@dataclass(frozen=True)
class MetaTemplate:
    kind: str
    k: int
    edges: tuple  # (i, j) pairs with i < j, unit weight
    params: dict = field(default_factory=dict, compare=False)

    def adjacency(self) -> np.ndarray:
        A = np.zeros((self.k, self.k))
        for i, j in self.edges:
            A[i, j] = A[j, i] = 1.0
        return A

    def meta_graph(self) -> MetaGraph:
        return meta_graph_from_edges(self.k, self.edges)

    def spec(self) -> str:
        if self.kind == "grid":
            return f"grid:{self.params['rows']}x{self.params['cols']}"
        if self.kind == "custom":
            return "custom"
        return f"{self.kind}:{self.k}"


def _connected(k, edges):
    parent = list(range(k))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, j in edges:
        parent[find(i)] = find(j)
    return len({find(i) for i in range(k)}) == 1


def meta_template(kind: str, **params) -> MetaTemplate:
    """Named unit-weight template.

    ``cycle(k)``, ``path(k)``, ``complete(k)``, ``grid(rows, cols)`` (row-major
    vertex order) or ``custom(k, edges)``.
    """
    if kind in ("cycle", "path", "complete"):
        k = params.get("k")
        if not isinstance(k, (int, np.integer)) or k < 2 or (kind == "cycle" and k < 3):
            raise BadParams(f"{kind} needs an integer k (>= 3 for cycles), got {k!r}")
        k = int(k)
        if kind == "cycle":
            edges = [(i, i + 1) for i in range(k - 1)] + [(0, k - 1)]
        elif kind == "path":
            edges = [(i, i + 1) for i in range(k - 1)]
        else:
            edges = [(i, j) for i in range(k) for j in range(i + 1, k)]
        params = {"k": k}
    elif kind == "grid":
        r, c = params.get("rows"), params.get("cols")
        if not all(isinstance(x, (int, np.integer)) and x >= 1 for x in (r, c)) or r * c < 2:
            raise BadParams(f"grid needs positive rows and cols, got {r!r} x {c!r}")
        r, c = int(r), int(c)
        k = r * c
        edges = []
        for a in range(r):
            for b in range(c):
                v = a * c + b
                if b + 1 < c:
                    edges.append((v, v + 1))
                if a + 1 < r:
                    edges.append((v, v + c))
        params = {"rows": r, "cols": c}
    elif kind == "custom":
        k = params.get("k")
        raw = params.get("edges")
        if not isinstance(k, (int, np.integer)) or k < 2 or raw is None:
            raise BadParams("custom templates need k >= 2 and an edge list")
        k = int(k)
        seen = set()
        for e in raw:
            i, j = int(e[0]), int(e[1])
            if i == j or not (0 <= i < k and 0 <= j < k):
                raise BadParams(f"bad template edge {e!r}")
            seen.add((min(i, j), max(i, j)))
        edges = sorted(seen)
        params = {"k": k, "edges": [list(e) for e in edges]}
    else:
        raise BadParams(f"unknown template kind {kind!r}")
    edges = tuple(sorted(edges))
    if not _connected(k, edges):
        raise BadParams("template must be connected")
    return MetaTemplate(kind=kind, k=k, edges=edges, params=params)


def parse_template(text: str) -> MetaTemplate:
    """Parse ``cycle:10``, ``path:5``, ``complete:4`` or ``grid:4x4``."""
    try:
        kind, _, arg = text.partition(":")
        if kind == "grid":
            r, c = arg.lower().split("x")
            return meta_template("grid", rows=int(r), cols=int(c))
        return meta_template(kind, k=int(arg))
    except (ValueError, TypeError) as exc:
        raise BadParams(f"cannot parse template {text!r}") from exc


def template_from_dict(d: dict) -> MetaTemplate:
    d = dict(d)
    kind = d.pop("kind")
    return meta_template(kind, **d)


def _pairs_within(rng, m, p):
    """Sample the ``i < j`` pairs of ``range(m)`` independently with probability ``p``."""
    total = m * (m - 1) // 2
    count = rng.binomial(total, p)
    if count == 0:
        return np.empty(0, np.int64), np.empty(0, np.int64)
    idx = np.sort(rng.choice(total, size=count, replace=False))
    rows, cols = np.triu_indices(m, 1)
    return rows[idx], cols[idx]


def _pairs_between(rng, m, q):
    total = m * m
    count = rng.binomial(total, q)
    if count == 0:
        return np.empty(0, np.int64), np.empty(0, np.int64)
    idx = np.sort(rng.choice(total, size=count, replace=False))
    return idx // m, idx % m


@dataclass(frozen=True)
class SBMInstance:
    graph: WeightedGraph
    truth: Clustering
    repaired: tuple = ()  # vertices that received a repair edge
    seed: int = 0


def sbm_meta(template: MetaTemplate, n_per_cluster: int, p: float, q: float,
             seed: int = 0) -> SBMInstance:
    """Planted-partition graph whose inter-cluster edges follow ``template``.

    Each intra-cluster pair is an edge with probability ``p``; a pair in
    clusters ``i != j`` is an edge with probability ``q`` when ``(i, j)`` is a
    template edge and never otherwise. Vertices ``i*n .. (i+1)*n - 1`` form
    cluster ``i``. Any isolated vertex is joined to a uniformly chosen vertex
    of its own cluster.
    """
    n = int(n_per_cluster)
    if n < 2:
        raise BadParams("n_per_cluster must be >= 2")
    if not 0.0 <= q <= p <= 1.0:
        raise BadParams(f"need 0 <= q <= p <= 1, got p={p}, q={q}")
    k = template.k
    template_degree = np.bincount(np.array(template.edges).ravel(), minlength=k) if template.edges else np.zeros(k)
    expected = (n - 1) * p + n * q * template_degree.min()
    if expected < 1.0:
        raise DegenerateProbabilities(f"expected degree {expected:.3g} < 1")

    rng = np.random.default_rng(seed)
    src, dst = [], []
    for c in range(k):
        i, j = _pairs_within(rng, n, p)
        src.append(i + c * n)
        dst.append(j + c * n)
    for a, b in template.edges:
        i, j = _pairs_between(rng, n, q)
        src.append(i + a * n)
        dst.append(j + b * n)
    src = np.concatenate(src) if src else np.empty(0, np.int64)
    dst = np.concatenate(dst) if dst else np.empty(0, np.int64)

    N = k * n
    repaired = []
    existing = set()
    for _ in range(MAX_REPAIR_ROUNDS):
        deg = np.bincount(src, minlength=N) + np.bincount(dst, minlength=N)
        isolated = np.flatnonzero(deg == 0)
        if isolated.size == 0:
            break
        if not existing:
            existing = set(zip(np.minimum(src, dst).tolist(), np.maximum(src, dst).tolist()))
        add_s, add_d = [], []
        for u in isolated.tolist():
            if deg[u] > 0:
                continue
            c = u // n
            v = u
            while v == u:
                v = int(rng.integers(c * n, (c + 1) * n))
            e = (min(u, v), max(u, v))
            if e in existing:
                continue
            existing.add(e)
            add_s.append(e[0])
            add_d.append(e[1])
            deg[u] += 1
            deg[v] += 1
            repaired.append(u)
        src = np.concatenate([src, np.array(add_s, dtype=np.int64)])
        dst = np.concatenate([dst, np.array(add_d, dtype=np.int64)])
    else:
        deg = np.bincount(src, minlength=N) + np.bincount(dst, minlength=N)
        if np.any(deg == 0):
            raise TooManyRetries("isolated vertices remain after repair")

    edges = np.column_stack([src, dst, np.ones(src.size)])
    G = build_graph(edges, n=N)
    truth = Clustering(np.repeat(np.arange(k), n), k)
    return SBMInstance(graph=G, truth=truth, repaired=tuple(repaired), seed=seed)

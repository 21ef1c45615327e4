import itertools

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from metaspectral.graph import build_graph
from metaspectral.pipeline import Clustering

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def cliques(k, m, bridge=None):
    """``k`` disjoint cliques of size ``m``; ``bridge`` adds a weight-w edge
    between consecutive cliques."""
    edges = [(c * m + i, c * m + j, 1.0) for c in range(k)
             for i, j in itertools.combinations(range(m), 2)]
    if bridge:
        edges += [(c * m, (c + 1) * m + 1, bridge) for c in range(k - 1)]
    return build_graph(edges), Clustering(np.repeat(np.arange(k), m), k)


def random_connected_graph(rng, n, p=0.4, weighted=True):
    """Random graph containing a spanning path, so it is connected."""
    edges = {}
    perm = rng.permutation(n)
    for a, b in zip(perm[:-1], perm[1:]):
        edges[(min(a, b), max(a, b))] = 1.0
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p:
                edges[(i, j)] = 1.0
    out = []
    for (i, j), _ in sorted(edges.items()):
        w = float(rng.uniform(0.5, 2.0)) if weighted else 1.0
        out.append((int(i), int(j), w))
    return build_graph(out, n=n)


def random_partition(rng, n, k):
    labels = np.concatenate([np.arange(k), rng.integers(0, k, n - k)])
    return Clustering(rng.permutation(labels), k)


def cycle_graph(n):
    return build_graph([(i, (i + 1) % n, 1.0) for i in range(n)])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)

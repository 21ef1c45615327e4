import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from metaspectral.errors import (DuplicateEdge, EmptySet, FullSet, InvalidK, IsolatedVertex,
                                 NegativeWeight, SelfLoop, TooLarge, VertexOutOfRange)
from metaspectral.graph import (build_graph, conductance, graph_conductance_bruteforce,
                                k_way_expansion_bruteforce, normalized_laplacian)

from conftest import cycle_graph, random_connected_graph

TRIANGLE = [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)]
TWO_TRIANGLES = TRIANGLE + [(3, 4, 1.0), (4, 5, 1.0), (3, 5, 1.0)]


def test_triangle_degrees_and_volume():
    G = build_graph(TRIANGLE)
    assert G.degree.tolist() == [2, 2, 2]
    assert G.total_volume == 6


def test_path_volume():
    G = build_graph([(0, 1, 1), (1, 2, 1)])
    assert G.total_volume == 4
    assert G.degree[1] == 2


@pytest.mark.parametrize("edges", [[(0, 1, 2), (0, 1, 3)], [(0, 1, 2), (1, 0, 3)]])
def test_duplicate_edge(edges):
    with pytest.raises(DuplicateEdge):
        build_graph(edges)


def test_rejections():
    with pytest.raises(NegativeWeight):
        build_graph([(0, 1, -1.0)])
    with pytest.raises(SelfLoop):
        build_graph([(0, 0, 1.0), (0, 1, 1.0)])
    with pytest.raises(IsolatedVertex):
        build_graph([(0, 1, 1.0)], n=3)
    with pytest.raises(VertexOutOfRange):
        build_graph([(0, 5, 1.0)], n=3)
    with pytest.raises(VertexOutOfRange):
        build_graph([(-1, 1, 1.0)])


def test_zero_weight_dropped():
    G = build_graph([(0, 1, 1.0), (1, 2, 0.0), (0, 2, 1.0)])
    assert G.num_edges == 2
    assert G.degree.tolist() == [2, 1, 1]


def test_graph_is_immutable():
    G = build_graph(TRIANGLE)
    with pytest.raises(ValueError):
        G.degree[0] = 5


def test_conductance_examples():
    assert conductance(build_graph(TWO_TRIANGLES), [0, 1, 2]) == 0
    assert conductance(build_graph([(0, 1, 1.0)]), [0]) == 1
    assert conductance(cycle_graph(6), [0, 1, 2]) == pytest.approx(1 / 3, abs=1e-15)


def test_conductance_errors():
    G = build_graph(TRIANGLE)
    with pytest.raises(EmptySet):
        conductance(G, [])
    with pytest.raises(FullSet):
        conductance(G, [0, 1, 2])


def test_cut_identity_random(rng):
    for _ in range(20):
        G = random_connected_graph(rng, 15)
        S = rng.random(15) < 0.5
        if S.all() or not S.any():
            continue
        cut = G.cut(S)
        assert cut == pytest.approx(G.volume(S) - 2 * G.internal_weight(S), abs=1e-12)
        assert cut == pytest.approx(G.cut(~S), abs=1e-12)
        # dense oracle
        A = G.dense_adjacency()
        assert cut == pytest.approx(A[np.ix_(S, ~S)].sum(), abs=1e-12)


@given(st.integers(0, 10_000), st.integers(3, 12))
def test_conductance_in_unit_interval(seed, n):
    rng = np.random.default_rng(seed)
    G = random_connected_graph(rng, n)
    S = rng.permutation(n)[: rng.integers(1, n)]
    assert 0.0 <= conductance(G, S) <= 1.0


def test_bruteforce_examples():
    rho, labels = k_way_expansion_bruteforce(build_graph(TWO_TRIANGLES), 2)
    assert rho == 0
    assert len(set(labels[:3])) == 1 and labels[0] != labels[3]
    rho, _ = k_way_expansion_bruteforce(cycle_graph(4), 2)
    assert rho == pytest.approx(0.5)
    K4 = build_graph([(i, j, 1.0) for i, j in itertools.combinations(range(4), 2)])
    rho, _ = k_way_expansion_bruteforce(K4, 2)
    # a 2-2 split: cut 4, each side volume 6
    assert rho == pytest.approx(4 / 6)


def _naive_rho(G, k):
    """Enumerate every labelling in [k]^n (independent of the bitmask search)."""
    best = np.inf
    for labels in itertools.product(range(k), repeat=G.n):
        if labels[0] != 0 or len(set(labels)) != k:
            continue
        lab = np.array(labels)
        best = min(best, max(conductance(G, lab == i) for i in range(k)))
    return best


def test_bruteforce_matches_naive(rng):
    for n, k in [(6, 2), (7, 3), (8, 2)]:
        G = random_connected_graph(rng, n, p=0.3)
        rho, labels = k_way_expansion_bruteforce(G, k)
        assert rho == pytest.approx(_naive_rho(G, k), abs=1e-12)
        assert max(conductance(G, labels == i) for i in range(k)) == pytest.approx(rho)


def test_bruteforce_guards():
    with pytest.raises(TooLarge):
        k_way_expansion_bruteforce(cycle_graph(15), 2)
    with pytest.raises(InvalidK):
        k_way_expansion_bruteforce(cycle_graph(5), 1)
    with pytest.raises(InvalidK):
        k_way_expansion_bruteforce(cycle_graph(5), 6)


def test_graph_conductance_bruteforce():
    assert graph_conductance_bruteforce(cycle_graph(6)) == pytest.approx(1 / 3)


def test_single_edge_laplacian():
    N = normalized_laplacian(build_graph([(0, 1, 1.0)]))
    assert np.array_equal(N.to_dense(), [[1, -1], [-1, 1]])


def test_laplacian_psd_and_matvec(rng):
    G = random_connected_graph(rng, 20)
    N = normalized_laplacian(G)
    D = np.diag(1 / np.sqrt(G.degree))
    dense = np.eye(20) - D @ G.dense_adjacency() @ D
    for _ in range(100):
        x = rng.standard_normal(20)
        assert N.quadratic_form(x) >= -1e-12
        assert np.allclose(N.matvec(x), dense @ x, atol=1e-12, rtol=0)
    vals = np.linalg.eigvalsh(N.to_dense())
    assert vals[0] <= 1e-10 and vals[-1] <= 2 + 1e-10


def test_quadratic_form_edge_sum(rng):
    G = random_connected_graph(rng, 12)
    x = rng.standard_normal(12)
    y = x / np.sqrt(G.degree)
    direct = sum(w * (y[u] - y[v]) ** 2 for u, v, w in G.edges())
    assert normalized_laplacian(G).quadratic_form(x) == pytest.approx(direct, rel=1e-12)


def test_components():
    G = build_graph(TWO_TRIANGLES)
    assert G.num_components() == 2
    vals = np.linalg.eigvalsh(G.normalized_laplacian().to_dense())
    assert vals[1] <= 1e-10 and vals[2] > 1e-3

import numpy as np
import pytest

from metaspectral.errors import ParseError, TooLarge
from metaspectral.similarity import FeatureTable, gaussian_graph, knn_graph, read_feature_csv


def _dense(G):
    return G.dense_adjacency()


def test_identical_points_unit_weight():
    G = gaussian_graph(np.zeros((2, 3)), sigma=1.0)
    assert _dense(G)[0, 1] == pytest.approx(1.0)


def test_kernel_value():
    sigma = 0.7
    X = np.array([[0.0, 0.0], [sigma * np.sqrt(2), 0.0]])
    assert _dense(gaussian_graph(X, sigma))[0, 1] == pytest.approx(np.exp(-1), rel=1e-12)


def test_collinear_triangle_against_direct_formula():
    X = np.array([[0.0], [1.0], [3.0]])
    A = _dense(gaussian_graph(X, 1.0))
    for i in range(3):
        for j in range(3):
            if i != j:
                assert A[i, j] == pytest.approx(np.exp(-(X[i, 0] - X[j, 0]) ** 2 / 2), rel=1e-12)


def test_floor_and_cap():
    X = np.arange(10.0)[:, None]
    G = gaussian_graph(X, 1.0, weight_floor=np.exp(-2.0))  # keeps distance-1 pairs only
    assert G.num_edges == 9
    with pytest.raises(TooLarge):
        gaussian_graph(X, 1.0, max_pairs=10)


def test_knn_collinear():
    X = np.array([[0.0], [1.0], [2.0], [3.0]])
    G = knn_graph(X, 1)
    assert sorted((int(u), int(v)) for u, v, _ in G.edges()) == [(0, 1), (1, 2), (2, 3)]


def test_knn_complete():
    rng = np.random.default_rng(0)
    G = knn_graph(rng.normal(size=(7, 2)), 6)
    assert G.num_edges == 21


def test_knn_two_blobs():
    rng = np.random.default_rng(1)
    X = np.vstack([rng.normal(0, 0.1, (20, 2)), rng.normal(10, 0.1, (20, 2))])
    G = knn_graph(X, 3)
    assert G.num_components() == 2
    assert np.all(np.diff(G.adjacency.indptr) >= 3)


def test_knn_tie_break_lower_id():
    # vertex 1 is equidistant from 0 and 2; with k=1 it picks 0
    X = np.array([[0.0], [1.0], [2.0], [10.0]])
    G = knn_graph(X, 1)
    edges = {(int(u), int(v)) for u, v, _ in G.edges()}
    assert (0, 1) in edges and (2, 3) in edges


def test_knn_kernel_weights():
    X = np.array([[0.0], [1.0], [2.0]])
    G = knn_graph(X, 1, weighted=True, sigma=1.0)
    assert np.allclose(G.weight, np.exp(-0.5))


def test_feature_csv(tmp_path):
    p = tmp_path / "f.csv"
    p.write_text("f1,f2,label\n0,0,0\n1,1,1\n")
    ft = read_feature_csv(p)
    assert ft.n == 2 and ft.d == 2 and ft.labels.tolist() == [0, 1]
    p.write_text("f1,f2\n0,0\n1,x\n")
    with pytest.raises(ParseError, match=":3:"):
        read_feature_csv(p)
    with pytest.raises(ValueError):
        FeatureTable(np.array([[np.nan]]))

import numpy as np
import pytest

from metaspectral.errors import BadL, EmptyCluster, InvalidK, LabelOutOfRange
from metaspectral.generators import meta_template, sbm_meta
from metaspectral.graph import build_graph
from metaspectral.metrics import accuracy
from metaspectral.pipeline import Clustering, spectral_cluster, spectral_embed

from conftest import cliques, cycle_graph


def test_clustering_validation():
    with pytest.raises(EmptyCluster):
        Clustering([0, 0, 2], 3)
    with pytest.raises(LabelOutOfRange):
        Clustering([0, 3], 2)
    c = Clustering.from_labels([1, 0, 1])
    assert c.k == 2 and c.sizes().tolist() == [1, 2]


def test_embedding_invariants(rng):
    inst = sbm_meta(meta_template("cycle", k=5), 40, 0.2, 0.02, seed=1)
    G = inst.graph
    emb = spectral_embed(G, 4)
    F = emb.points
    assert np.allclose(F, emb.eigen.vectors[:, :4] / np.sqrt(G.degree)[:, None], atol=1e-12)
    assert np.allclose((G.degree[:, None] * F ** 2).sum(0), 1.0, atol=1e-8)


def test_two_triangles_embedding():
    G, _ = cliques(2, 3)
    F = spectral_embed(G, 2).points
    assert np.allclose(F[:3], F[0], atol=1e-8) and np.allclose(F[3:], F[3], atol=1e-8)
    assert np.linalg.norm(F[0] - F[3]) > 0.1


def test_single_edge_embedding():
    F = spectral_embed(build_graph([(0, 1, 1.0)]), 1).points
    assert np.allclose(F[:, 0], 1 / np.sqrt(2), atol=1e-12)


def test_six_cycle_on_circle():
    F = spectral_embed(cycle_graph(6), 3).points[:, 1:]
    radii = np.linalg.norm(F, axis=1)
    assert np.allclose(radii, radii[0], atol=1e-8)
    steps = [np.linalg.norm(F[i] - F[(i + 1) % 6]) for i in range(6)]
    assert np.allclose(steps, steps[0], atol=1e-8)


def test_drop_trivial():
    G = cycle_graph(8)
    full = spectral_embed(G, 3)
    dropped = spectral_embed(G, 2, drop_trivial=True)
    assert dropped.first_index == 1
    assert np.allclose(dropped.points, full.points[:, 1:3], atol=1e-10)


@pytest.mark.parametrize("k", [2, 5, 10])
def test_exact_recovery_on_cliques(k):
    G, truth = cliques(k, 20)
    out = spectral_cluster(G, k)
    assert accuracy(out, truth) == 1.0


def test_k_one():
    G = cycle_graph(5)
    out = spectral_cluster(G, 1)
    assert out.k == 1 and np.all(out.labels == 0)


def test_errors():
    G = cycle_graph(5)
    with pytest.raises(BadL):
        spectral_cluster(G, 2, 3)
    with pytest.raises(InvalidK):
        spectral_cluster(G, 6)


def test_deterministic_and_partition():
    inst = sbm_meta(meta_template("cycle", k=6), 50, 0.2, 0.02, seed=9)
    a = spectral_cluster(inst.graph, 6, 3, seed=4)
    b = spectral_cluster(inst.graph, 6, 3, seed=4)
    assert np.array_equal(a.labels, b.labels)
    assert a.sizes().min() > 0 and a.n == inst.graph.n


def test_fewer_eigenvectors_better_on_cycle_meta():
    acc3, acc10 = [], []
    for seed in range(10):
        inst = sbm_meta(meta_template("cycle", k=10), 200, 0.05, 0.05 / 2.5, seed=seed)
        acc3.append(accuracy(spectral_cluster(inst.graph, 10, 3, seed=seed), inst.truth))
        acc10.append(accuracy(spectral_cluster(inst.graph, 10, 10, seed=seed), inst.truth))
    assert np.mean(acc3) > np.mean(acc10)

import itertools
import warnings

import numpy as np
import pytest
from hypothesis import given, strategies as st

from metaspectral.errors import KMismatch
from metaspectral.graph import build_graph
from metaspectral.metrics import (accuracy, confusion, optimal_match, pair_indices,
                                  symdiff_volume)
from metaspectral.pipeline import Clustering

from conftest import random_connected_graph, random_partition


def _brute_overlap(out, truth, k):
    return max(sum(np.sum((truth == i) & (out == p[i])) for i in range(k))
               for p in itertools.permutations(range(k)))


def _brute_symdiff(out, truth, k, deg):
    return min(sum(deg[(truth == i) != (out == p[i])].sum() for i in range(k))
               for p in itertools.permutations(range(k)))


def _pair_oracle(a, b):
    n = a.size
    agree = same_both = same_a = same_b = 0
    for i in range(n):
        for j in range(i + 1, n):
            sa, sb = a[i] == a[j], b[i] == b[j]
            agree += sa == sb
            same_both += sa and sb
            same_a += sa
            same_b += sb
    pairs = n * (n - 1) / 2
    expected = same_a * same_b / pairs
    return agree / pairs, (same_both - expected) / ((same_a + same_b) / 2 - expected)


@given(st.integers(0, 10_000))
def test_match_against_permutation_oracle(s):
    rng = np.random.default_rng(s)
    k = int(rng.integers(2, 7))
    n = int(rng.integers(k + 5, 40))
    G = random_connected_graph(rng, n, p=0.3)
    t = random_partition(rng, n, k)
    o = random_partition(rng, n, k)
    m = optimal_match(o, t)
    assert m.objective == _brute_overlap(o.labels, t.labels, k)
    assert sorted(m.permutation) == list(range(k))
    assert symdiff_volume(o, t, G) == pytest.approx(
        _brute_symdiff(o.labels, t.labels, k, G.degree), abs=1e-9)


def test_swapped_labels_perfect():
    t = Clustering(np.repeat([0, 1, 2], 4), 3)
    o = Clustering(np.repeat([2, 0, 1], 4), 3)
    assert accuracy(o, t) == 1.0
    assert optimal_match(o, t).permutation.tolist() == [2, 0, 1]
    assert pair_indices(o, t) == (1.0, 1.0, 1.0)


def test_tie_break_lexicographic():
    # uniform confusion: every permutation achieves the same overlap
    t = Clustering(np.repeat(np.arange(3), 9), 3)
    o = Clustering(np.tile(np.repeat(np.arange(3), 3), 3), 3)
    assert np.array_equal(confusion(t, o), np.full((3, 3), 3))
    assert optimal_match(o, t).permutation.tolist() == [0, 1, 2]


def test_single_misplaced_vertex_symdiff():
    edges = [(i, j, 1.0) for i in range(4) for j in range(i + 1, 4)]
    edges += [(i + 4, j + 4, 1.0) for i in range(4) for j in range(i + 1, 4)]
    edges.append((3, 4, 2.0))
    G = build_graph(edges)
    t = Clustering(np.repeat([0, 1], 4), 2)
    lab = t.labels.copy()
    lab[3] = 1
    assert symdiff_volume(Clustering(lab, 2), t, G) == pytest.approx(2 * G.degree[3])


def test_accuracy_example():
    t = Clustering(np.repeat(np.arange(10), 100), 10)
    lab = t.labels.copy()
    lab[::100] = (lab[::100] + 1) % 10  # one vertex per cluster moves
    assert accuracy(Clustering(lab, 10), t) == pytest.approx(0.99)


def test_accuracy_unequal_sizes_warns():
    t = Clustering([0, 0, 0, 1], 2)
    with pytest.warns(UserWarning):
        assert accuracy(Clustering([0, 0, 1, 1], 2), t) == pytest.approx(0.75)


def test_random_two_clustering_accuracy():
    rng = np.random.default_rng(1)
    t = Clustering(np.repeat([0, 1], 500), 2)
    vals = [accuracy(Clustering(rng.integers(0, 2, 1000), 2), t) for _ in range(20)]
    assert abs(np.mean(vals) - 0.5) <= 0.1
    assert min(vals) >= 0.5


def test_k_mismatch():
    with pytest.raises(KMismatch):
        accuracy(Clustering([0, 1, 2], 3), Clustering([0, 1, 1], 2))


@given(st.integers(0, 10_000))
def test_pair_indices_oracle(s):
    rng = np.random.default_rng(s)
    n = int(rng.integers(5, 40))
    a = rng.integers(0, int(rng.integers(2, 5)), n)
    b = rng.integers(0, int(rng.integers(2, 5)), n)
    if np.unique(a).size < 2 or np.unique(b).size < 2:
        return
    rand, ari, nmi = pair_indices(a, b)
    r0, a0 = _pair_oracle(b, a)
    assert rand == pytest.approx(r0, abs=1e-12)
    assert ari == pytest.approx(a0, abs=1e-12)
    assert 0.0 <= nmi <= 1.0


def test_singletons_vs_one_cluster():
    rand, ari, nmi = pair_indices(np.arange(4), np.zeros(4, int))
    assert rand == 0.0 and ari == 0.0 and nmi == 0.0


def test_random_ari_centred():
    rng = np.random.default_rng(7)
    vals = [pair_indices(rng.integers(0, 5, 500), rng.integers(0, 5, 500))[1]
            for _ in range(50)]
    assert abs(np.mean(vals)) <= 0.05


@given(st.integers(0, 10_000))
def test_relabel_invariance(s):
    rng = np.random.default_rng(s)
    t = random_partition(rng, 30, 4)
    o = random_partition(rng, 30, 4)
    perm = rng.permutation(4)
    o2 = Clustering(perm[o.labels], 4)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        assert accuracy(o, t) == accuracy(o2, t)
    assert np.allclose(pair_indices(o, t), pair_indices(o2, t), atol=1e-12)


def test_sklearn_cross_check():
    skm = pytest.importorskip("sklearn.metrics")
    rng = np.random.default_rng(3)
    for _ in range(10):
        a, b = rng.integers(0, 4, 200), rng.integers(0, 6, 200)
        rand, ari, nmi = pair_indices(a, b)
        assert rand == pytest.approx(skm.rand_score(b, a), abs=1e-12)
        assert ari == pytest.approx(skm.adjusted_rand_score(b, a), abs=1e-12)
        assert nmi == pytest.approx(skm.normalized_mutual_info_score(b, a), abs=1e-12)

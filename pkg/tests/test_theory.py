import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from metaspectral.errors import DisconnectedGraph, KMismatch
from metaspectral.generators import meta_template, sbm_meta
from metaspectral.metagraph import graph_eigen
from metaspectral.pipeline import Clustering
from metaspectral.theory import (STATUSES, TheoryReport, approximate_centers,
                                 center_geometry_report, full_report, kmeans_cost_identity,
                                 make_record, misclassification_bound_check,
                                 verify_structure_theorem_k, verify_structure_theorem_meta)

from conftest import cliques, random_connected_graph, random_partition


def _cycle_instance(seed, k=10, n=100, p=0.3, q=0.01):
    inst = sbm_meta(meta_template("cycle", k=k), n, p, q, seed=seed)
    return inst.graph, inst.truth


def test_record_semantics():
    r = make_record("x", 1.0, 2.0)
    assert r.slack == 1.0 and r.status == "satisfied"
    assert make_record("x", 2.0, 1.0).status == "violated"
    assert make_record("x", 1.0 + 1e-9, 1.0).status == "satisfied"
    assert make_record("x", 2.0, 1.0, applicable=False).status == "not-applicable"
    assert make_record("x", 1.0, 2.0, surrogate=True).status == "surrogate"
    assert make_record("x", 2.0, 1.0, surrogate=True).status == "violated"


def test_cliques_zero_residuals():
    G, T = cliques(4, 6)
    rep = verify_structure_theorem_k(G, T)
    for r in rep.matching("structure.cluster_residual"):
        assert r.lhs == pytest.approx(0.0, abs=1e-10)
        assert r.status == "satisfied"
    assert rep.get("structure.total_residual").status == "satisfied"  # optimality is trivial
    assert rep.ok


def test_bridged_cliques_all_satisfied():
    G, T = cliques(2, 6, bridge=1.0)
    rep = verify_structure_theorem_k(G, T)
    assert rep.ok
    assert {r.status for r in rep.statements} <= {"satisfied"}  # exact rho certifies


def test_cycle_sbm_statements_hold():
    for seed in range(3):
        G, T = _cycle_instance(seed)
        rep = verify_structure_theorem_k(G, T, seed=seed)
        assert rep.ok, [r for r in rep.violated()]
        assert rep.get("structure.total_residual").status == "surrogate"


@settings(max_examples=25)
@given(st.integers(0, 10_000))
def test_projection_identity_random_partitions(s):
    rng = np.random.default_rng(s)
    n = int(rng.integers(10, 30))
    k = int(rng.integers(2, 5))
    G = random_connected_graph(rng, n)
    T = random_partition(rng, n, k)
    rep = verify_structure_theorem_k(G, T, seed=s)
    r = rep.get("structure.projection_identity")
    assert r.lhs <= 1e-8 and r.status == "satisfied"
    for i in range(k):
        assert rep.get(f"structure.cluster_residual[{i}]").status == "satisfied"
        assert rep.get(f"structure.quadratic_form[{i}]").lhs <= 1e-8


def test_meta_at_full_l_matches_k_version(rng):
    G = random_connected_graph(rng, 30)
    T = random_partition(rng, 30, 4)
    rk = verify_structure_theorem_k(G, T)
    rm = verify_structure_theorem_meta(G, T, 4)
    tk = sum(r.lhs for r in rk.matching("structure.cluster_residual"))
    tm = sum(r.lhs for r in rm.matching("meta.cluster_residual"))
    assert tk == pytest.approx(tm, abs=1e-8)
    assert rm.ok


def test_meta_c6_l3_satisfied():
    for seed in range(10):
        G, T = _cycle_instance(seed, k=6, n=60, p=0.3, q=0.02)
        rep = verify_structure_theorem_meta(G, T, 3, seed=seed)
        assert rep.ok
        assert rep.get("meta.total_residual").status == "satisfied"
        assert rep.get("meta.blowup_orthonormality").lhs <= 1e-8
        assert len(rep.matching("meta.interlacing")) == 6


def test_disconnected_rejected():
    G, T = cliques(3, 4)
    with pytest.raises(DisconnectedGraph):
        verify_structure_theorem_k(G, Clustering(np.repeat([0, 1], [4, 8]), 2))


def test_centers_on_cliques():
    G, T = cliques(3, 5, bridge=0.1)
    P = approximate_centers(G, T, 3, eigen=graph_eigen(G, 4))
    assert np.allclose((P ** 2).sum(1), 1 / T.volumes(G), rtol=1e-2)
    G, T = cliques(3, 5)
    P = approximate_centers(G, T, 3)
    vol = T.volumes(G)
    assert np.allclose((P ** 2).sum(1), 1 / vol, atol=1e-12)
    gram = P @ P.T
    assert np.abs(gram - np.diag(np.diag(gram))).max() <= 1e-12


def test_center_report_holds():
    G, T = cliques(3, 8, bridge=1.0)
    rep = center_geometry_report(G, T)
    assert rep.ok
    G, T = _cycle_instance(1, k=6, n=60, p=0.3, q=0.02)
    rep = center_geometry_report(G, T, 3)
    assert rep.ok
    assert {r.status for r in rep.statements} <= set(STATUSES)


def test_cost_identity():
    G, T = cliques(3, 5)
    assert kmeans_cost_identity(G, T) == pytest.approx(0.0, abs=1e-12)
    for seed in range(3):
        G, T = _cycle_instance(seed, k=6, n=60, p=0.3, q=0.02)
        rep = verify_structure_theorem_meta(G, T, 3, seed=seed)
        cost = kmeans_cost_identity(G, T, 3, seed=seed)
        assert 0 <= cost <= rep.instance["psi"] + 1e-8


def test_misclassification_perfect_and_mismatch():
    G, T = cliques(3, 6, bridge=1.0)
    rep = misclassification_bound_check(G, T, T)
    assert rep.get("misclassification.symdiff_volume").lhs == 0.0
    assert rep.instance["apt"] == pytest.approx(1.0)
    with pytest.raises(KMismatch):
        misclassification_bound_check(G, T, Clustering(np.zeros(G.n, int), 1))


def test_misclassification_disjoint_cliques_bound_zero():
    G, T = cliques(2, 4)
    rep = misclassification_bound_check(G, T, T)
    r = rep.get("misclassification.symdiff_volume")
    assert r.bound == 0.0 and r.status == "satisfied"


def test_full_report_json_roundtrip():
    G, T = _cycle_instance(0, k=6, n=40, p=0.4, q=0.02)
    rep = full_report(G, T, 3, seed=0)
    data = json.loads(rep.to_json())
    assert set(data) == {"instance", "statements"}
    ids = [s["id"] for s in data["statements"]]
    assert len(ids) == len(set(ids))
    assert all(s["status"] in STATUSES for s in data["statements"])
    assert {s["status"] for s in data["statements"]} <= {"satisfied", "not-applicable",
                                                         "surrogate"}


def test_infinite_bound_serialises():
    rep = TheoryReport({"upsilon": float("inf"), "x": float("nan")}, [make_record("a", 0, np.inf)])
    data = json.loads(rep.to_json())
    assert data["instance"] == {"upsilon": "inf", "x": None}
    assert data["statements"][0]["bound"] == "inf"


def test_relabel_invariance(rng):
    G = random_connected_graph(rng, 24)
    T = random_partition(rng, 24, 3)
    perm = np.array([2, 0, 1])
    T2 = Clustering(perm[T.labels], 3)
    a = verify_structure_theorem_k(G, T)
    b = verify_structure_theorem_k(G, T2)
    res_a = sorted(r.lhs for r in a.matching("structure.cluster_residual"))
    res_b = sorted(r.lhs for r in b.matching("structure.cluster_residual"))
    assert np.allclose(res_a, res_b, atol=1e-9)
    assert a.get("structure.total_residual").bound == pytest.approx(
        b.get("structure.total_residual").bound)

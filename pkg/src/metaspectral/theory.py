"""Numerical checks of the spectral-clustering structure results on concrete graphs.

Every check produces :class:`StatementRecord` entries of the form
``lhs <= bound``. Lower bounds ``value >= b`` are stored with
``lhs = b`` and ``bound = value``; equalities as ``|a - b| <= 0``. The same
``slack = bound - lhs >= -1e-8`` rule then applies to every record.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .eigen import EigenPairs
from .errors import (DisconnectedGraph, IdentityViolation, KMismatch, ZeroEmbeddingNorm)
from .graph import WeightedGraph
from .kmeans import kmeans, kmeans_cost, weighted_centroids
from .metagraph import (MetaEmbedding, blow_up, build_meta_graph, distinguishability_theta,
                        graph_eigen, meta_embedding, normalized_indicators, upsilon)
from .metrics import symdiff_volume
from .pipeline import Clustering

TOL = 1e-8
ZERO_GAP = 1e-10
APT_RESTARTS = 50
MISCLASSIFICATION_CONSTANT = 2176
STATUSES = ("satisfied", "violated", "not-applicable", "surrogate")


@dataclass(frozen=True)
class StatementRecord:
    id: str
    lhs: float
    bound: float
    slack: float
    satisfied: bool
    status: str

    def to_dict(self) -> dict:
        return {"id": self.id, "lhs": _json_float(self.lhs), "bound": _json_float(self.bound),
                "slack": _json_float(self.slack), "status": self.status,
                "satisfied": self.satisfied}


def _json_float(x):
    if x is None:
        return None
    x = float(x)
    if math.isnan(x):
        return None
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


def _json_value(v):
    if isinstance(v, (float, np.floating)):
        return _json_float(v)
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.bool_,)):
        return bool(v)
    if isinstance(v, dict):
        return {k: _json_value(x) for k, x in v.items()}
    if isinstance(v, (list, tuple, np.ndarray)):
        return [_json_value(x) for x in v]
    return v


def make_record(sid: str, lhs: float, bound: float, applicable: bool = True,
                surrogate: bool = False) -> StatementRecord:
    lhs, bound = float(lhs), float(bound)
    if math.isinf(bound) and math.isinf(lhs) and bound == lhs:
        slack = 0.0
    else:
        slack = bound - lhs
    satisfied = bool(slack >= -TOL)
    if not applicable:
        status = "not-applicable"
    elif not satisfied:
        status = "violated"
    elif surrogate:
        status = "surrogate"
    else:
        status = "satisfied"
    return StatementRecord(sid, lhs, bound, slack, satisfied, status)


def _at_least(sid, value, lower, applicable=True):
    """``value >= lower`` recorded with the lower bound as ``lhs``."""
    return make_record(sid, lower, value, applicable=applicable)


def _equality(sid, a, b):
    return make_record(sid, abs(float(a) - float(b)), 0.0)


@dataclass
class TheoryReport:
    """Statement records plus instance metadata (``n``, ``k``, ``l``, ``seed``, ...)."""

    instance: dict = field(default_factory=dict)
    statements: list = field(default_factory=list)

    def add(self, record: StatementRecord) -> None:
        self.statements.append(record)

    def get(self, sid: str) -> StatementRecord:
        for r in self.statements:
            if r.id == sid:
                return r
        raise KeyError(sid)

    def matching(self, prefix: str) -> list:
        return [r for r in self.statements if r.id.startswith(prefix)]

    def violated(self) -> list:
        return [r for r in self.statements if r.status == "violated"]

    @property
    def ok(self) -> bool:
        return not self.violated()

    def merge(self, other: "TheoryReport") -> "TheoryReport":
        inst = dict(self.instance)
        for key, val in other.instance.items():
            inst.setdefault(key, val)
        return TheoryReport(inst, list(self.statements) + list(other.statements))

    def to_dict(self) -> dict:
        return {"instance": _json_value(self.instance),
                "statements": [r.to_dict() for r in self.statements]}

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent, allow_nan=False)


# ---------------------------------------------------------------------------
# shared geometry


def _eigen(G, count, eigen, seed):
    count = min(count, G.n)
    if eigen is None or len(eigen) < count:
        eigen = graph_eigen(G, count, seed)
    return eigen


def _require_gap(eigen: EigenPairs, l: int):
    lam = float(eigen.values[l])
    if lam <= ZERO_GAP:
        raise DisconnectedGraph(f"lambda_{l + 1} = {lam:.3e}; the bounds are vacuous")
    return lam


@dataclass(frozen=True)
class _Projections:
    """Residuals between eigenvectors ``f`` and an orthonormal family ``gbar``."""

    f: np.ndarray
    gbar: np.ndarray
    gbar_residual: np.ndarray  # ||gbar_i - fhat_i||^2
    f_residual: np.ndarray  # ||f_i - ghat_i||^2
    g_hat: np.ndarray  # columns ghat_i


def _projections(f, gbar) -> _Projections:
    # both sides are formed as explicit vectors so the identity check compares
    # two independent computations
    f_hat = f @ (f.T @ gbar)
    g_hat = gbar @ (gbar.T @ f)
    gbar_res = ((gbar - f_hat) ** 2).sum(0)
    f_res = ((f - g_hat) ** 2).sum(0)
    return _Projections(f, gbar, gbar_res, f_res, g_hat)


def _meta(G, clustering, l):
    M = build_meta_graph(G, clustering)
    return M, meta_embedding(M, max(l, 1))


def _theta(ME: MetaEmbedding):
    try:
        d = distinguishability_theta(ME)
    except ZeroEmbeddingNorm:
        return 0.0, 0.0, 0.0
    return d.theta, d.min_norm_sq, d.min_separation_sq


def _base_instance(G, clustering, l, seed):
    return {"n": G.n, "k": clustering.k, "l": l, "seed": seed}


# ---------------------------------------------------------------------------
# structure results


def verify_structure_theorem_k(G: WeightedGraph, clustering: Clustering,
                               eigen: EigenPairs | None = None, seed: int = 0) -> TheoryReport:
    """Compare bottom-``k`` eigenvectors with the normalised cluster indicators.

    Records per cluster ``||gbar_i - fhat_i||^2 <= Phi(S_i) / lambda_{k+1}`` and
    ``gbar_i^T N gbar_i = Phi(S_i)``; the projection identity
    ``sum ||f_i - ghat_i||^2 = sum ||gbar_j - fhat_j||^2``; the aggregate bound
    ``k / Upsilon``; and ``lambda_k / 2 <= rho(k)``. Bounds that need the true
    ``rho(k)`` use the partition's largest conductance unless brute force
    certifies the partition optimal, and are then marked ``surrogate``.
    """
    k = clustering.k
    if k >= G.n:
        raise ValueError(f"need k < n, got k={k}, n={G.n}")
    eigen = _eigen(G, k + 1, eigen, seed)
    lam = _require_gap(eigen, k)
    ups = upsilon(G, clustering, eigen=eigen, seed=seed)
    phi = clustering.conductances(G)
    gbar = normalized_indicators(G, clustering)
    proj = _projections(eigen.vectors[:, :k], gbar)
    N = G.normalized_laplacian()

    report = TheoryReport(_base_instance(G, clustering, k, seed))
    report.instance.update(lambda_k_plus_1=lam, lambda_k=float(eigen.values[k - 1]),
                           upsilon_surrogate=ups.value, upsilon_exact=ups.exact_value,
                           rho_exact=ups.exact_rho, max_conductance=ups.max_conductance)
    for i in range(k):
        report.add(_equality(f"structure.quadratic_form[{i}]",
                             N.quadratic_form(gbar[:, i]), phi[i]))
    for i in range(k):
        report.add(make_record(f"structure.cluster_residual[{i}]",
                               proj.gbar_residual[i], phi[i] / lam))
    report.add(_equality("structure.projection_identity",
                         proj.f_residual.sum(), proj.gbar_residual.sum()))

    certified = ups.partition_is_optimal
    u = ups.best_value if certified else ups.value
    total_bound = 0.0 if math.isinf(u) else k / u
    report.add(make_record("structure.total_residual", proj.f_residual.sum(), total_bound,
                           surrogate=not certified))
    rho = ups.exact_rho if ups.exact_rho is not None else ups.max_conductance
    report.add(make_record("structure.lambda_k_vs_expansion", eigen.values[k - 1] / 2, rho,
                           surrogate=ups.exact_rho is None))
    return report


def verify_structure_theorem_meta(G: WeightedGraph, clustering: Clustering, l: int,
                                  eigen: EigenPairs | None = None, seed: int = 0) -> TheoryReport:
    """Compare bottom-``l`` eigenvectors with blow-ups of the meta-graph eigenvectors.

    Records orthonormality of the blow-ups, ``gbar_i^T N gbar_i = gamma_i``,
    interlacing ``lambda_i <= gamma_i`` for all ``i <= k``, the per-vector bound
    ``||gbar_i - fhat_i||^2 <= gamma_i / lambda_{l+1}``, the projection identity
    and the aggregate bound ``sum_{i<=l} ||f_i - ghat_i||^2 <= Psi(l)``.
    """
    k = clustering.k
    if not 1 <= l <= k or l >= G.n:
        raise ValueError(f"need 1 <= l <= k and l < n, got l={l}")
    eigen = _eigen(G, max(k, l + 1), eigen, seed)
    lam = _require_gap(eigen, l)
    M = build_meta_graph(G, clustering)
    ME_full = meta_embedding(M, k)
    gamma = ME_full.gamma
    gbar_all = blow_up(G, clustering, ME_full.vectors)
    gbar = gbar_all[:, :l]
    proj = _projections(eigen.vectors[:, :l], gbar)
    psi_value = float(np.clip(gamma[:l], 0, None).sum() / lam)
    N = G.normalized_laplacian()

    report = TheoryReport(_base_instance(G, clustering, l, seed))
    report.instance.update(lambda_l_plus_1=lam, psi=psi_value, gamma=gamma.tolist())
    gram = gbar_all.T @ gbar_all
    report.add(make_record("meta.blowup_orthonormality",
                           float(np.abs(gram - np.eye(k)).max()), 0.0))
    for i in range(l):
        report.add(_equality(f"meta.quadratic_form[{i}]", N.quadratic_form(gbar[:, i]), gamma[i]))
    n_lam = min(k, len(eigen))
    for i in range(n_lam):
        report.add(make_record(f"meta.interlacing[{i}]", eigen.values[i], gamma[i]))
    for i in range(l):
        report.add(make_record(f"meta.cluster_residual[{i}]", proj.gbar_residual[i],
                               max(gamma[i], 0.0) / lam))
    report.add(_equality("meta.projection_identity",
                         proj.f_residual.sum(), proj.gbar_residual.sum()))
    report.add(make_record("meta.total_residual", proj.f_residual.sum(), psi_value))
    return report


# ---------------------------------------------------------------------------
# approximate centers


def approximate_centers(G: WeightedGraph, clustering: Clustering, l: int,
                        eigen: EigenPairs | None = None, seed: int = 0,
                        meta: MetaEmbedding | None = None) -> np.ndarray:
    """Rows ``p^(i)`` with ``p^(i)(j) = sum_{x<=l} <f_j, gbar_x> g_x(i) / sqrt(vol(S_i))``.

    With ``l = k`` this reduces to ``<f_j, D^{1/2} chi_i / ||D^{1/2} chi_i||> / sqrt(vol(S_i))``.
    """
    eigen = _eigen(G, l, eigen, seed)
    if meta is None or meta.l < l:
        _, meta = _meta(G, clustering, l)
    g = meta.vectors[:, :l]
    gbar = blow_up(G, clustering, g)
    inner = eigen.vectors[:, :l].T @ gbar  # (j, x) = <f_j, gbar_x>
    vol = clustering.volumes(G)
    return (g @ inner.T) / np.sqrt(vol)[:, None]


def _indicator_centers(G, clustering, eigen):
    k = clustering.k
    gbar = normalized_indicators(G, clustering)
    vol = clustering.volumes(G)
    return (gbar.T @ eigen.vectors[:, :k]) / np.sqrt(vol)[:, None]


def _pairs(k):
    return [(i, j) for i in range(k) for j in range(i + 1, k)]


def _unit_rows(P):
    norms = np.linalg.norm(P, axis=1)
    with np.errstate(invalid="ignore", divide="ignore"):
        return P / norms[:, None]


def center_geometry_report(G: WeightedGraph, clustering: Clustering, l: int | None = None,
                           eigen: EigenPairs | None = None, seed: int = 0) -> TheoryReport:
    """Length and separation of the approximate cluster centers.

    With ``l = k`` the centers come from normalised indicators and the bounds
    are in terms of ``Upsilon = lambda_{k+1} / max_i Phi(S_i)``: the two-sided
    norm bound always, the pairwise separation bounds when ``Upsilon >= 20``.
    With ``l < k`` the centers use the meta-graph eigenvectors and the bounds
    are in terms of ``Psi(l)`` and ``theta``: the norm and scaled-separation
    bounds when ``Psi < 1``, the normalised and raw separation bounds when
    ``Psi <= theta^3 / 1600``. Inapplicable bounds are ``not-applicable``.
    """
    k = clustering.k
    l = k if l is None else l
    if not 1 <= l <= k or l >= G.n:
        raise ValueError(f"need 1 <= l <= k and l < n, got l={l}")
    eigen = _eigen(G, l + 1, eigen, seed)
    lam = float(eigen.values[l])
    vol = clustering.volumes(G)
    report = TheoryReport(_base_instance(G, clustering, l, seed))
    pairs = _pairs(k)

    if l == k:
        P = _indicator_centers(G, clustering, eigen)
        phi_max = float(clustering.conductances(G).max())
        ups = math.inf if phi_max <= 0 else (lam / phi_max if lam > 0 else 0.0)
        inv = 0.0 if math.isinf(ups) else (math.inf if ups == 0 else 1.0 / ups)
        sep_ok = ups >= 20
        report.instance.update(lambda_l_plus_1=lam, upsilon_surrogate=ups)
        norms_sq = (P * P).sum(1)
        for i in range(k):
            report.add(_at_least(f"centers.norm_lower[{i}]", norms_sq[i], (1 - inv) / vol[i]))
            report.add(make_record(f"centers.norm_upper[{i}]", norms_sq[i], 1 / vol[i]))
        scaled = P * np.sqrt(vol)[:, None]
        U = _unit_rows(P)
        for i, j in pairs:
            d_scaled = float(((scaled[i] - scaled[j]) ** 2).sum())
            report.add(_at_least(f"centers.scaled_separation[{i},{j}]", d_scaled,
                                 2 - 8 * inv, applicable=sep_ok))
            d_unit = float(((U[i] - U[j]) ** 2).sum())
            report.add(_at_least(f"centers.normalized_separation[{i},{j}]", d_unit,
                                 2 - 20 * inv, applicable=sep_ok))
            d = float(((P[i] - P[j]) ** 2).sum())
            report.add(_at_least(f"centers.separation[{i},{j}]", d,
                                 (0.5 - 8 * inv) / min(vol[i], vol[j]), applicable=sep_ok))
        return report

    lam_ok = lam > ZERO_GAP
    _, ME = _meta(G, clustering, l)
    P = approximate_centers(G, clustering, l, eigen=eigen, meta=ME)
    x_sq = (ME.vectors[:, :l] ** 2).sum(1)
    theta, _, _ = _theta(ME)
    psi_value = float(np.clip(ME.gamma[:l], 0, None).sum() / lam) if lam_ok else math.inf
    rp = math.sqrt(psi_value) if lam_ok else math.inf
    report.instance.update(lambda_l_plus_1=lam, psi=psi_value, theta=theta)
    norm_ok = lam_ok and theta > 0 and psi_value < 1
    far_ok = lam_ok and theta > 0 and psi_value <= theta ** 3 / 1600
    t = theta if theta > 0 else math.nan
    norms_sq = (P * P).sum(1)
    for i in range(k):
        lo = (1 - 4 * rp / t) * x_sq[i] / vol[i] if norm_ok else math.nan
        hi = (1 + 2 * rp / t) * x_sq[i] / vol[i] if norm_ok else math.nan
        report.add(_at_least(f"centers.norm_lower[{i}]", norms_sq[i], lo, applicable=norm_ok))
        report.add(make_record(f"centers.norm_upper[{i}]", norms_sq[i], hi, applicable=norm_ok))
    with np.errstate(invalid="ignore", divide="ignore"):
        scaled = P * (np.sqrt(vol) / np.sqrt(x_sq))[:, None]
    U = _unit_rows(P)
    for i, j in pairs:
        d_scaled = float(((scaled[i] - scaled[j]) ** 2).sum())
        report.add(_at_least(f"centers.scaled_separation[{i},{j}]", d_scaled,
                             theta - 3 * rp if norm_ok else math.nan, applicable=norm_ok))
        d_unit = float(((U[i] - U[j]) ** 2).sum())
        b = theta / 4 - 8 * math.sqrt(psi_value / t) if far_ok else math.nan
        report.add(_at_least(f"centers.normalized_separation[{i},{j}]", d_unit, b,
                             applicable=far_ok))
        d = float(((P[i] - P[j]) ** 2).sum())
        b = ((theta ** 2 - 20 * math.sqrt(theta * psi_value)) / (16 * min(vol[i], vol[j]))
             if far_ok else math.nan)
        report.add(_at_least(f"centers.separation[{i},{j}]", d, b, applicable=far_ok))
    return report


def kmeans_cost_identity(G: WeightedGraph, clustering: Clustering, l: int | None = None,
                         eigen: EigenPairs | None = None, seed: int = 0) -> float:
    """Degree-weighted k-means cost of the embedding around the approximate centers.

    Computes ``sum_i sum_{u in S_i} deg(u) ||F(u) - p^(i)||^2`` and checks that it
    equals ``sum_{j<=l} ||f_j - ghat_j||^2``, raising :class:`IdentityViolation`
    otherwise. Returns the value.
    """
    k = clustering.k
    l = k if l is None else l
    if not 1 <= l <= k:
        raise ValueError(f"need 1 <= l <= k, got l={l}")
    eigen = _eigen(G, l, eigen, seed)
    _, ME = _meta(G, clustering, l)
    P = approximate_centers(G, clustering, l, eigen=eigen, meta=ME)
    f = eigen.vectors[:, :l]
    F = f / np.sqrt(G.degree)[:, None]
    diff = F - P[clustering.labels]
    cost = float((G.degree * (diff * diff).sum(1)).sum())
    gbar = blow_up(G, clustering, ME.vectors[:, :l])
    residual = float(_projections(f, gbar).f_residual.sum())
    if abs(cost - residual) > TOL * max(1.0, abs(residual)):
        raise IdentityViolation(f"cost {cost!r} differs from residual sum {residual!r}")
    return cost


# ---------------------------------------------------------------------------
# misclassification


def _almost_balanced(vol):
    total, k = vol.sum(), vol.size
    return bool(np.all(vol >= total / (2 * k)) and np.all(vol <= 2 * total / k))


def measure_apt(G: WeightedGraph, output: Clustering, l: int, eigen: EigenPairs | None = None,
                seed: int = 0, restarts: int = APT_RESTARTS) -> float:
    """Ratio of the output's weighted k-means cost on the ``l``-dimensional
    embedding to the best cost found over ``restarts`` fresh runs (at least 1)."""
    eigen = _eigen(G, l, eigen, seed)
    F = eigen.vectors[:, :l] / np.sqrt(G.degree)[:, None]
    achieved = kmeans_cost(F, output.labels, output.k, weights=G.degree)
    best = kmeans(F, output.k, weights=G.degree, restarts=restarts, seed=seed).cost
    best = min(best, achieved)
    if best <= 0:
        return 1.0
    return float(achieved / best)


def _sigma_ratio(G, truth, output, l, eigen, meta):
    """``sum_i vol(M_{sigma,i} △ S_i) / vol(S_i)`` with ``sigma(i)`` the nearest
    approximate center to output center ``c_i``."""
    P = approximate_centers(G, truth, l, eigen=eigen, meta=meta)
    F = eigen.vectors[:, :l] / np.sqrt(G.degree)[:, None]
    C, _ = weighted_centroids(F, G.degree, output.labels, output.k)
    d = ((C[:, None, :] - P[None, :, :]) ** 2).sum(-1)
    sigma = np.argmin(d, axis=1)
    merged = sigma[output.labels]  # vertex u lies in M_{sigma, merged[u]}
    wrong = merged != truth.labels
    vol = truth.volumes(G)
    deg = G.degree[wrong]
    per = (np.bincount(merged[wrong], weights=deg, minlength=truth.k)
           + np.bincount(truth.labels[wrong], weights=deg, minlength=truth.k))
    return float((per / vol).sum()), sigma


def misclassification_bound_check(G: WeightedGraph, truth: Clustering, output: Clustering,
                                  l: int | None = None, apt: float | None = None,
                                  eigen: EigenPairs | None = None, seed: int = 0) -> TheoryReport:
    """Misclassified volume of ``output`` against the spectral-clustering guarantees.

    ``lhs`` is ``sum_i vol(A_i △ S_i)`` under the min-symmetric-difference
    matching. With ``l = k`` the bound is ``2176 (1 + APT) vol(V) / Upsilon``,
    applicable when the clusters are almost balanced and
    ``Upsilon >= 2176 (1 + APT)``; with ``l < k`` it is
    ``2176 (1 + APT) Psi vol(V) / (k theta^2)``, applicable when
    ``Psi <= theta^3 / (2176 (1 + APT))``. The per-cluster ratio bounds
    ``64 (1 + APT) k / Upsilon`` (``Upsilon >= 32``) and
    ``64 (1 + APT) Psi / theta^2`` (``Psi <= theta^3 / 1600``) are recorded too.
    ``APT`` is measured with :func:`measure_apt` unless given.
    """
    if truth.k != output.k:
        raise KMismatch(f"truth has {truth.k} clusters, output has {output.k}")
    if truth.n != G.n or output.n != G.n:
        raise ValueError("clusterings must cover the graph's vertices")
    k = truth.k
    l = k if l is None else l
    if not 1 <= l <= k or l >= G.n:
        raise ValueError(f"need 1 <= l <= k and l < n, got l={l}")
    eigen = _eigen(G, max(l, k) + 1 if k < G.n else G.n, eigen, seed)
    if apt is None:
        apt = measure_apt(G, output, l, eigen=eigen, seed=seed)
    vol = truth.volumes(G)
    total = float(vol.sum())
    balanced = _almost_balanced(vol)
    lhs = symdiff_volume(output, truth, G)
    c = MISCLASSIFICATION_CONSTANT * (1 + apt)

    report = TheoryReport(_base_instance(G, truth, l, seed))
    report.instance.update(apt=apt, almost_balanced=balanced, symdiff_volume=lhs)
    _, ME = _meta(G, truth, l)
    if l == k:
        ups = upsilon(G, truth, eigen=eigen, seed=seed)
        certified = ups.partition_is_optimal
        u = ups.best_value if certified else ups.value
        report.instance.update(upsilon=u, upsilon_certified=certified)
        bound = 0.0 if math.isinf(u) else (c * total / u if u > 0 else math.inf)
        report.add(make_record("misclassification.symdiff_volume", lhs, bound,
                               applicable=balanced and u >= c, surrogate=not certified))
        ratio, _ = _sigma_ratio(G, truth, output, l, eigen, ME)
        rb = 0.0 if math.isinf(u) else (64 * (1 + apt) * k / u if u > 0 else math.inf)
        report.add(make_record("misclassification.nearest_center_ratio", ratio, rb,
                               applicable=u >= 32, surrogate=not certified))
        return report

    lam = float(eigen.values[l])
    theta, _, _ = _theta(ME)
    if lam <= ZERO_GAP:
        psi_value = math.inf
    else:
        psi_value = float(np.clip(ME.gamma[:l], 0, None).sum() / lam)
    report.instance.update(psi=psi_value, theta=theta)
    ok = theta > 0 and psi_value <= theta ** 3 / c
    bound = c * psi_value * total / (k * theta ** 2) if theta > 0 else math.inf
    report.add(make_record("misclassification.symdiff_volume", lhs, bound,
                           applicable=ok and balanced))
    ratio, _ = _sigma_ratio(G, truth, output, l, eigen, ME)
    ok = theta > 0 and psi_value <= theta ** 3 / 1600
    rb = 64 * (1 + apt) * psi_value / theta ** 2 if theta > 0 else math.inf
    report.add(make_record("misclassification.nearest_center_ratio", ratio, rb, applicable=ok))
    return report


def full_report(G: WeightedGraph, truth: Clustering, l: int, output: Clustering | None = None,
                seed: int = 0, restarts: int = 10) -> TheoryReport:
    """Every check above for one instance; ``output`` defaults to spectral
    clustering with ``l`` eigenvectors."""
    from .pipeline import spectral_cluster

    k = truth.k
    eigen = _eigen(G, max(k, l) + 1, None, seed)
    report = verify_structure_theorem_k(G, truth, eigen=eigen, seed=seed)
    report.instance["l"] = l
    report = report.merge(verify_structure_theorem_meta(G, truth, l, eigen=eigen, seed=seed))
    report = report.merge(center_geometry_report(G, truth, l, eigen=eigen, seed=seed))
    cost = kmeans_cost_identity(G, truth, l, eigen=eigen, seed=seed)
    psi_value = report.instance["psi"]
    report.add(make_record("centers.cost_vs_psi", cost, psi_value))
    if output is None:
        output = spectral_cluster(G, k, l, seed=seed, restarts=restarts, eigen=eigen)
    report = report.merge(misclassification_bound_check(G, truth, output, l, eigen=eigen,
                                                        seed=seed))
    return report

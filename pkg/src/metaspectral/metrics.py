"""Compare an output clustering with ground truth."""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import KMismatch
from .graph import WeightedGraph
from .pipeline import Clustering

OBJECTIVES = ("max-overlap-count", "min-symdiff-volume")


def _labels(c):
    return c.labels if isinstance(c, Clustering) else np.asarray(c, dtype=np.int64)


def _k(c):
    return c.k if isinstance(c, Clustering) else int(np.max(c)) + 1


def confusion(truth, output, k: int | None = None, weights=None) -> np.ndarray:
    """``C[i, j]`` = (weighted) size of ``S_i ∩ A_j``."""
    t, o = _labels(truth), _labels(output)
    if t.shape != o.shape:
        raise ValueError("clusterings cover different vertex sets")
    if k is None:
        k = max(_k(truth), _k(output))
    flat = t * k + o
    return np.bincount(flat, weights=weights, minlength=k * k).reshape(k, k)


@dataclass(frozen=True)
class MatchResult:
    """``permutation[i]`` is the output cluster matched to truth cluster ``i``."""

    permutation: np.ndarray
    overlaps: np.ndarray  # confusion counts, rows = truth, cols = output
    objective: float
    kind: str


def _check_k(output, truth):
    ko, kt = _k(output), _k(truth)
    if ko != kt:
        raise KMismatch(f"output has {ko} clusters, truth has {kt}")
    return kt


def _score_matrix(output, truth, k, objective, G):
    """Matrix to minimise: entry ``(i, j)`` is the cost of pairing truth i with output j."""
    counts = confusion(truth, output, k)
    if objective == "max-overlap-count":
        return -counts, counts
    if G is None:
        raise ValueError("min-symdiff-volume needs the graph")
    vol_both = confusion(truth, output, k, weights=G.degree)
    vol_t = vol_both.sum(1)
    vol_o = vol_both.sum(0)
    return vol_t[:, None] + vol_o[None, :] - 2.0 * vol_both, counts


def _lexicographic_optimum(cost):
    """Optimal assignment, ties broken towards the lexicographically smallest permutation."""
    k = cost.shape[0]
    r, c = linear_sum_assignment(cost)
    best = cost[r, c].sum()
    scale = max(1.0, float(np.abs(cost).max()) * k)
    tol = 1e-9 * scale
    perm = np.empty(k, dtype=np.int64)
    free_rows = list(range(k))
    free_cols = list(range(k))
    fixed = 0.0
    for i in range(k):
        free_rows.remove(i)
        for j in sorted(free_cols):
            cols = [x for x in free_cols if x != j]
            rest = 0.0
            if free_rows:
                sub = cost[np.ix_(free_rows, cols)]
                rr, cc = linear_sum_assignment(sub)
                rest = sub[rr, cc].sum()
            if fixed + cost[i, j] + rest <= best + tol:
                perm[i] = j
                fixed += cost[i, j]
                free_cols.remove(j)
                break
    return perm


def optimal_match(output, truth, G: WeightedGraph | None = None,
                  objective: str = "max-overlap-count") -> MatchResult:
    """Exact optimal bijection between truth and output clusters.

    ``max-overlap-count`` maximises the number of vertices in matched pairs;
    ``min-symdiff-volume`` minimises ``sum_i vol(A_{perm[i]} △ S_i)``.
    """
    if objective not in OBJECTIVES:
        raise ValueError(f"objective must be one of {OBJECTIVES}")
    k = _check_k(output, truth)
    cost, counts = _score_matrix(output, truth, k, objective, G)
    perm = _lexicographic_optimum(cost)
    value = cost[np.arange(k), perm].sum()
    if objective == "max-overlap-count":
        value = -value
    return MatchResult(permutation=perm, overlaps=counts, objective=float(value), kind=objective)


def accuracy(output, truth) -> float:
    """Fraction of vertices in matched clusters under the max-overlap matching.

    With equal-size truth clusters this is ``sum_i |S_i ∩ A_σ(i)| / (n k)`` for
    clusters of size ``n``; otherwise the total vertex count normalises and a
    warning is issued.
    """
    k = _check_k(output, truth)
    sizes = np.bincount(_labels(truth), minlength=k)
    if np.any(sizes != sizes[0]):
        warnings.warn("truth clusters have unequal sizes; accuracy normalised by vertex count",
                      stacklevel=2)
    m = optimal_match(output, truth, objective="max-overlap-count")
    return m.objective / _labels(truth).size


def symdiff_volume(output, truth, G: WeightedGraph) -> float:
    """``sum_i vol(A_σ(i) △ S_i)`` under the min-symmetric-difference matching."""
    return optimal_match(output, truth, G, objective="min-symdiff-volume").objective


def _comb2(x):
    x = np.asarray(x, dtype=float)
    return x * (x - 1) / 2


def _entropy(counts, n):
    p = counts[counts > 0] / n
    return float(-(p * np.log(p)).sum())


def pair_indices(output, truth, nmi_norm: str = "arithmetic"):
    """Rand index, adjusted Rand index and normalised mutual information.

    Clusterings may have different numbers of clusters. ``nmi_norm`` is
    ``"arithmetic"`` (mean of the two entropies) or ``"max"``.
    """
    o, t = _labels(output), _labels(truth)
    if o.shape != t.shape:
        raise ValueError("clusterings cover different vertex sets")
    n = o.size
    # compact labels so the contingency table has no empty rows/cols
    _, o = np.unique(o, return_inverse=True)
    _, t = np.unique(t, return_inverse=True)
    ko, kt = o.max() + 1, t.max() + 1
    table = np.bincount(t * ko + o, minlength=kt * ko).reshape(kt, ko).astype(float)
    a = table.sum(1)
    b = table.sum(0)
    pairs = n * (n - 1) / 2
    same_both = _comb2(table).sum()
    same_t = _comb2(a).sum()
    same_o = _comb2(b).sum()
    if pairs == 0:
        rand = 1.0
    else:
        rand = float((pairs + 2 * same_both - same_t - same_o) / pairs)
    expected = same_t * same_o / pairs if pairs else 0.0
    max_index = (same_t + same_o) / 2
    if max_index == expected:
        ari = 1.0
    else:
        ari = float((same_both - expected) / (max_index - expected))

    ht, ho = _entropy(a, n), _entropy(b, n)
    # I(t; o) = H(t) + H(o) - H(t, o); exact for identical partitions
    mi = ht + ho - _entropy(table.ravel(), n)
    if nmi_norm == "arithmetic":
        denom = (ht + ho) / 2
    elif nmi_norm == "max":
        denom = max(ht, ho)
    else:
        raise ValueError("nmi_norm must be 'arithmetic' or 'max'")
    if ht == 0 and ho == 0:
        nmi = 1.0
    elif denom == 0:
        nmi = 0.0
    else:
        nmi = min(1.0, max(0.0, mi / denom))
    return rand, ari, nmi

"""Weighted k-means with k-means++ seeding and Lloyd iterations."""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import DegeneratePoints, KTooLarge, LabelOutOfRange


@dataclass(frozen=True)
class KMeansResult:
    centers: np.ndarray
    labels: np.ndarray
    cost: float
    seeding_cost: float = float("nan")
    history: tuple = field(default=(), repr=False)
    seed: int | None = None


def _check(points, weights):
    X = np.asarray(points, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    if X.ndim != 2 or X.shape[1] < 1:
        raise ValueError("points must be an (n, d) array with d >= 1")
    if weights is None:
        w = np.ones(X.shape[0])
    else:
        w = np.asarray(weights, dtype=float)
        if w.shape != (X.shape[0],):
            raise ValueError("weights must have one entry per point")
        if np.any(w <= 0):
            raise ValueError("weights must be strictly positive")
    return X, w


def squared_distances(X, C):
    """Pairwise squared Euclidean distances, clipped at zero."""
    d = (X * X).sum(1)[:, None] - 2.0 * X @ C.T + (C * C).sum(1)[None, :]
    np.maximum(d, 0.0, out=d)
    return d


def assign(X, C):
    """Nearest center per point; ``argmin`` breaks ties by lowest index."""
    d = squared_distances(X, C)
    labels = np.argmin(d, axis=1)
    return labels, d[np.arange(X.shape[0]), labels]


def weighted_cost(X, w, labels, C) -> float:
    diff = X - C[labels]
    return float(np.sum(w * np.einsum("ij,ij->i", diff, diff)))


def weighted_centroids(X, w, labels, k):
    sums = np.zeros((k, X.shape[1]))
    np.add.at(sums, labels, X * w[:, None])
    mass = np.bincount(labels, weights=w, minlength=k)
    with np.errstate(invalid="ignore", divide="ignore"):
        return sums / mass[:, None], mass


def kmeans_plusplus(X, w, k, rng):
    """Weighted k-means++ seeding: sample proportional to ``w * D^2``."""
    n = X.shape[0]
    centers = np.empty((k, X.shape[1]))
    first = rng.choice(n, p=w / w.sum())
    centers[0] = X[first]
    closest = squared_distances(X, centers[:1])[:, 0]
    for c in range(1, k):
        score = w * closest
        total = score.sum()
        if total <= 0:
            # remaining mass sits on existing centers; pick an unused distinct point
            idx = int(np.flatnonzero(closest > 0)[0]) if np.any(closest > 0) else int(rng.integers(n))
        else:
            idx = rng.choice(n, p=score / total)
        centers[c] = X[idx]
        closest = np.minimum(closest, squared_distances(X, centers[c:c + 1])[:, 0])
    return centers


def _repair_empty(X, w, labels, C, mass):
    """Move each empty center onto the point with largest weighted distance."""
    empty = np.flatnonzero(mass == 0)
    if empty.size == 0:
        return C, labels
    labels = labels.copy()
    C = C.copy()
    taken = set()
    for c in empty:
        diff = X - C[labels]
        score = w * np.einsum("ij,ij->i", diff, diff)
        if taken:
            score[list(taken)] = -1.0
        # only steal from clusters that keep at least one point
        counts = np.bincount(labels, minlength=C.shape[0])
        score[counts[labels] <= 1] = -1.0
        u = int(np.argmax(score))
        taken.add(u)
        labels[u] = c
        C[c] = X[u]
    C, _ = weighted_centroids(X, w, labels, C.shape[0])
    return C, labels


def _single_run(X, w, k, max_iters, seed):
    rng = np.random.default_rng(seed)
    C = kmeans_plusplus(X, w, k, rng)
    labels, _ = assign(X, C)
    seeding_cost = weighted_cost(X, w, labels, C)
    history = [seeding_cost]
    for _ in range(max_iters):
        C_new, mass = weighted_centroids(X, w, labels, k)
        if np.any(mass == 0):
            C_new, labels = _repair_empty(X, w, labels, np.where(mass[:, None] > 0, C_new, C), mass)
        history.append(weighted_cost(X, w, labels, C_new))
        C = C_new
        new_labels, _ = assign(X, C)
        history.append(weighted_cost(X, w, new_labels, C))
        if np.array_equal(new_labels, labels):
            break
        labels = new_labels
    labels, _ = assign(X, C)
    cost = weighted_cost(X, w, labels, C)
    return KMeansResult(centers=C, labels=labels, cost=cost, seeding_cost=seeding_cost,
                        history=tuple(history), seed=seed)


def kmeans(points, k: int, weights=None, restarts: int = 10, max_iters: int = 300,
           seed: int = 0, n_jobs: int = 1) -> KMeansResult:
    """Best of ``restarts`` weighted k-means runs.

    Each run seeds with weighted k-means++ and iterates Lloyd steps until the
    assignment stops changing or ``max_iters`` is reached. Per-run seeds are
    spawned from ``seed``, so results do not depend on ``n_jobs``. Ties in
    final cost go to the earliest run.
    """
    X, w = _check(points, weights)
    n = X.shape[0]
    if k < 1 or k > n:
        raise KTooLarge(f"k={k} must lie in [1, n={n}]")
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    if np.unique(X, axis=0).shape[0] < k:
        raise DegeneratePoints(f"fewer than k={k} distinct points")
    seeds = [int(s.generate_state(1)[0]) for s in np.random.SeedSequence(seed).spawn(restarts)]
    if n_jobs > 1 and restarts > 1:
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            runs = list(pool.map(lambda s: _single_run(X, w, k, max_iters, s), seeds))
    else:
        runs = [_single_run(X, w, k, max_iters, s) for s in seeds]
    best = runs[0]
    for run in runs[1:]:
        if run.cost < best.cost:
            best = run
    return best


def kmeans_cost(points, labels, k: int | None = None, weights=None) -> float:
    """Weighted k-means cost with every center at its cluster's weighted centroid."""
    X, w = _check(points, weights)
    labels = np.asarray(labels)
    if labels.shape != (X.shape[0],):
        raise ValueError("labels must have one entry per point")
    if k is None:
        k = int(labels.max()) + 1
    if labels.min() < 0 or labels.max() >= k:
        raise LabelOutOfRange(f"labels must lie in [0, {k})")
    C, mass = weighted_centroids(X, w, labels, k)
    C[mass == 0] = 0.0
    return weighted_cost(X, w, labels, C)

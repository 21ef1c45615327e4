"""Similarity graphs from feature vectors: Gaussian kernel and k-nearest neighbours."""
from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .errors import DuplicatePointsExceedK, ParseError, TooLarge
from .graph import WeightedGraph, build_graph

MAX_DENSE_PAIRS = 25_000_000
BLOCK_ROWS = 1024


@dataclass(frozen=True, eq=False)
class FeatureTable:
    """``n`` feature vectors of dimension ``d`` and optional integer labels."""

    features: np.ndarray
    labels: np.ndarray | None = None

    def __post_init__(self):
        X = np.array(self.features, dtype=float)
        if X.ndim != 2 or X.shape[1] < 1:
            raise ValueError("features must be an (n, d) array")
        if not np.all(np.isfinite(X)):
            raise ValueError("features must be finite")
        X.setflags(write=False)
        object.__setattr__(self, "features", X)
        if self.labels is not None:
            y = np.asarray(self.labels, dtype=np.int64)
            if y.shape != (X.shape[0],):
                raise ValueError("one label per row required")
            object.__setattr__(self, "labels", y)

    @property
    def n(self) -> int:
        return self.features.shape[0]

    @property
    def d(self) -> int:
        return self.features.shape[1]


def read_feature_csv(path) -> FeatureTable:
    """Read a CSV with header ``f1,...,fd[,label]``."""
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise ParseError(f"{path}: empty file") from None
        has_label = bool(header) and header[-1] == "label"
        d = len(header) - has_label
        if d < 1:
            raise ParseError(f"{path}:1: header must name at least one feature column")
        rows, labels = [], []
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != len(header):
                raise ParseError(f"{path}:{lineno}: expected {len(header)} fields, got {len(row)}")
            try:
                rows.append([float(x) for x in row[:d]])
                if has_label:
                    labels.append(int(row[d]))
            except ValueError:
                raise ParseError(f"{path}:{lineno}: non-numeric field") from None
    if not rows:
        raise ParseError(f"{path}: no data rows")
    X = np.array(rows)
    if not np.all(np.isfinite(X)):
        raise ParseError(f"{path}: non-finite feature value")
    return FeatureTable(X, np.array(labels) if has_label else None)


def _as_points(ft):
    return ft.features if isinstance(ft, FeatureTable) else np.asarray(ft, dtype=float)


def _block_sq_dists(X, start, stop):
    B = X[start:stop]
    d = (B * B).sum(1)[:, None] - 2.0 * B @ X.T + (X * X).sum(1)[None, :]
    np.maximum(d, 0.0, out=d)
    return d


def gaussian_graph(ft, sigma: float, weight_floor: float = 0.0,
                   max_pairs: int = MAX_DENSE_PAIRS) -> WeightedGraph:
    """Graph with weight ``exp(-||u - v||^2 / (2 sigma^2))`` on every pair above ``weight_floor``.

    With ``weight_floor = 0`` the result is complete, and inputs with more
    than ``max_pairs`` pairs raise :class:`TooLarge`.
    """
    X = _as_points(ft)
    n = X.shape[0]
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    if n < 2:
        raise ValueError("need at least two points")
    if not 0.0 <= weight_floor < 1.0:
        raise ValueError("weight_floor must lie in [0, 1)")
    pairs = n * (n - 1) // 2
    if weight_floor == 0.0 and pairs > max_pairs:
        raise TooLarge(f"{pairs} pairs exceed the cap of {max_pairs}; set a weight floor")
    src, dst, wts = [], [], []
    for start in range(0, n, BLOCK_ROWS):
        stop = min(n, start + BLOCK_ROWS)
        W = np.exp(-_block_sq_dists(X, start, stop) / (2.0 * sigma * sigma))
        rows = np.arange(start, stop)[:, None]
        keep = (np.arange(n)[None, :] > rows) & (W > weight_floor)
        i, j = np.nonzero(keep)
        src.append(i + start)
        dst.append(j)
        wts.append(W[i, j])
    edges = np.column_stack([np.concatenate(src), np.concatenate(dst), np.concatenate(wts)])
    return build_graph(edges, n=n)


def knn_graph(ft, k_neighbours: int, weighted: bool = False,
              sigma: float | None = None) -> WeightedGraph:
    """Union-symmetrised k-nearest-neighbour graph with exact search.

    Each vertex links to its ``k_neighbours`` closest other points, ties in
    distance going to the lower vertex id; an edge is kept if either endpoint
    chose it. Edges have unit weight, or Gaussian weight with ``sigma`` when
    ``weighted`` is set.
    """
    X = _as_points(ft)
    n = X.shape[0]
    if not 1 <= k_neighbours < n:
        raise ValueError(f"need 1 <= k_neighbours < n, got {k_neighbours}")
    if weighted and (sigma is None or sigma <= 0):
        raise ValueError("weighted kNN needs a positive sigma")
    chosen_src, chosen_dst = [], []
    ids = np.arange(n)
    for start in range(0, n, BLOCK_ROWS):
        stop = min(n, start + BLOCK_ROWS)
        D = _block_sq_dists(X, start, stop)
        D[np.arange(stop - start), np.arange(start, stop)] = np.inf
        for r in range(stop - start):
            # lexsort: last key is primary, so distance first, then vertex id
            order = np.lexsort((ids, D[r]))[:k_neighbours]
            if not np.all(np.isfinite(D[r, order])):
                raise DuplicatePointsExceedK(f"vertex {start + r} has fewer than "
                                             f"{k_neighbours} distinct neighbours")
            chosen_src.append(np.full(order.size, start + r))
            chosen_dst.append(order)
    s = np.concatenate(chosen_src)
    d = np.concatenate(chosen_dst)
    lo, hi = np.minimum(s, d), np.maximum(s, d)
    pairs = np.unique(np.column_stack([lo, hi]), axis=0)
    if weighted:
        diff = X[pairs[:, 0]] - X[pairs[:, 1]]
        w = np.exp(-(diff * diff).sum(1) / (2.0 * sigma * sigma))
        w = np.maximum(w, np.finfo(float).tiny)
    else:
        w = np.ones(pairs.shape[0])
    return build_graph(np.column_stack([pairs, w]), n=n)

"""Spectral embedding and spectral clustering with ``l`` eigenvectors."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .eigen import DEFAULT_TOL, EigenPairs, bottom_eigenpairs
from .errors import BadL, EmptyCluster, InvalidK, LabelOutOfRange
from .graph import WeightedGraph
from .kmeans import kmeans


@dataclass(frozen=True, eq=False)
class Clustering:
    """A partition of ``range(n)`` into ``k`` non-empty clusters."""

    labels: np.ndarray
    k: int

    def __post_init__(self):
        labels = np.asarray(self.labels)
        if labels.ndim != 1:
            raise ValueError("labels must be one-dimensional")
        if labels.size and not np.issubdtype(labels.dtype, np.integer):
            if np.any(labels != np.round(labels)):
                raise ValueError("labels must be integers")
        labels = labels.astype(np.int64)
        if self.k < 1:
            raise InvalidK("k must be at least 1")
        if labels.size and (labels.min() < 0 or labels.max() >= self.k):
            raise LabelOutOfRange(f"labels must lie in [0, {self.k})")
        sizes = np.bincount(labels, minlength=self.k)
        empty = np.flatnonzero(sizes == 0)
        if empty.size:
            raise EmptyCluster(f"cluster {empty[0]} is empty")
        labels.setflags(write=False)
        object.__setattr__(self, "labels", labels)

    @classmethod
    def from_labels(cls, labels) -> "Clustering":
        labels = np.asarray(labels)
        return cls(labels, int(labels.max()) + 1)

    @property
    def n(self) -> int:
        return self.labels.size

    def sizes(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.k)

    def members(self, i: int) -> np.ndarray:
        return np.flatnonzero(self.labels == i)

    def indicator_matrix(self) -> np.ndarray:
        """``(n, k)`` 0/1 matrix whose column ``i`` is the indicator of cluster ``i``."""
        chi = np.zeros((self.n, self.k))
        chi[np.arange(self.n), self.labels] = 1.0
        return chi

    def volumes(self, G: WeightedGraph) -> np.ndarray:
        return np.bincount(self.labels, weights=G.degree, minlength=self.k)

    def conductances(self, G: WeightedGraph) -> np.ndarray:
        """Per-cluster conductance ``w(S_i, V \\ S_i) / vol(S_i)``."""
        lab = self.labels
        crossing = lab[G.src] != lab[G.dst]
        out = np.zeros(self.k)
        np.add.at(out, lab[G.src[crossing]], G.weight[crossing])
        np.add.at(out, lab[G.dst[crossing]], G.weight[crossing])
        return out / self.volumes(G)

    def relabeled(self, perm) -> "Clustering":
        """Cluster ``i`` becomes cluster ``perm[i]``."""
        perm = np.asarray(perm)
        return Clustering(perm[self.labels], self.k)


@dataclass(frozen=True)
class SpectralEmbedding:
    """Per-vertex points ``F(u) = (f_1(u), ..., f_l(u)) / sqrt(deg(u))``."""

    l: int
    eigen: EigenPairs
    points: np.ndarray
    first_index: int = 0  # 1 when the trivial eigenvector was dropped


def embed_from_eigen(G: WeightedGraph, eigen: EigenPairs, l: int,
                     drop_trivial: bool = False) -> SpectralEmbedding:
    start = 1 if drop_trivial else 0
    if l < 1 or start + l > len(eigen):
        raise BadL(f"need {start + l} eigenvectors, have {len(eigen)}")
    f = eigen.vectors[:, start:start + l]
    points = f / np.sqrt(G.degree)[:, None]
    points.setflags(write=False)
    return SpectralEmbedding(l=l, eigen=eigen, points=points, first_index=start)


def spectral_embed(G: WeightedGraph, l: int, seed: int = 0, drop_trivial: bool = False,
                   tol: float = DEFAULT_TOL, method: str = "auto") -> SpectralEmbedding:
    """Embed each vertex with the bottom ``l`` eigenvectors of the normalised Laplacian.

    With ``drop_trivial`` the first eigenvector is skipped and ``f_2..f_{l+1}``
    are used instead.
    """
    need = l + (1 if drop_trivial else 0)
    if not 1 <= need <= G.n:
        raise BadL(f"need 1 <= l <= n, got l={l}, n={G.n}")
    eigen = bottom_eigenpairs(G.normalized_laplacian(), need, tol=tol, seed=seed, method=method)
    return embed_from_eigen(G, eigen, l, drop_trivial)


def spectral_cluster(G: WeightedGraph, k: int, l: int | None = None, seed: int = 0,
                     restarts: int = 10, max_iters: int = 300, weighted: bool = True,
                     drop_trivial: bool = False, eigen: EigenPairs | None = None) -> Clustering:
    """Cluster ``G`` into ``k`` groups by k-means on the ``l``-dimensional embedding.

    ``l`` defaults to ``k``. k-means weights points by vertex degree unless
    ``weighted`` is false. Precomputed ``eigen`` (at least ``l`` pairs, or
    ``l + 1`` with ``drop_trivial``) skips the eigensolve.
    """
    if l is None:
        l = k
    if not 1 <= k <= G.n:
        raise InvalidK(f"need 1 <= k <= n, got k={k}, n={G.n}")
    if not 1 <= l <= k:
        raise BadL(f"need 1 <= l <= k, got l={l}, k={k}")
    if k == 1:
        return Clustering(np.zeros(G.n, dtype=np.int64), 1)
    if eigen is None:
        emb = spectral_embed(G, l, seed=seed, drop_trivial=drop_trivial)
    else:
        emb = embed_from_eigen(G, eigen, l, drop_trivial)
    res = kmeans(emb.points, k, weights=G.degree if weighted else None,
                 restarts=restarts, max_iters=max_iters, seed=seed)
    return Clustering(res.labels, k)

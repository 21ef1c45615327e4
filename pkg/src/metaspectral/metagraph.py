"""Meta-graphs of a partition, their spectral embedding and the derived
cluster-quality functionals.

The meta-graph of clusters ``S_1..S_k`` has adjacency ``A(i, j) = w(S_i, S_j)``
off the diagonal and ``A(i, i) = 2 w(S_i, S_i)``, so row ``i`` sums to
``vol(S_i)``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .eigen import EigenPairs, bottom_eigenpairs
from .errors import BadL, EmptyCluster, InvalidK, ZeroDenominator, ZeroEmbeddingNorm
from .graph import BRUTE_FORCE_LIMIT, WeightedGraph, k_way_expansion_bruteforce
from .pipeline import Clustering

ZERO_EIGENVALUE = 1e-12


@dataclass(frozen=True, eq=False)
class MetaGraph:
    adjacency: np.ndarray

    def __post_init__(self):
        A = np.array(self.adjacency, dtype=float)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise ValueError("meta adjacency must be square")
        if np.any(A < 0):
            raise ValueError("meta adjacency must be non-negative")
        if not np.allclose(A, A.T, rtol=0, atol=1e-12 * max(1.0, np.abs(A).max())):
            raise ValueError("meta adjacency must be symmetric")
        A = (A + A.T) / 2
        if np.any(A.sum(1) <= 0):
            raise EmptyCluster("every meta-vertex needs positive degree")
        A.setflags(write=False)
        object.__setattr__(self, "adjacency", A)

    @property
    def k(self) -> int:
        return self.adjacency.shape[0]

    @property
    def degrees(self) -> np.ndarray:
        return self.adjacency.sum(1)

    def normalized_laplacian(self) -> np.ndarray:
        s = 1.0 / np.sqrt(self.degrees)
        return np.eye(self.k) - s[:, None] * self.adjacency * s[None, :]

    def spectrum(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.normalized_laplacian())


def build_meta_graph(G: WeightedGraph, clustering: Clustering) -> MetaGraph:
    """Meta-graph of ``clustering`` on ``G``; row sums equal cluster volumes."""
    if clustering.n != G.n:
        raise ValueError("clustering size does not match graph")
    k = clustering.k
    a = clustering.labels[G.src]
    b = clustering.labels[G.dst]
    A = np.zeros((k, k))
    np.add.at(A, (a, b), G.weight)
    np.add.at(A, (b, a), G.weight)
    # internal edges landed twice on the diagonal, matching 2 w(S_i, S_i)
    M = MetaGraph(A)
    vol = clustering.volumes(G)
    if not np.allclose(M.degrees, vol, rtol=1e-9, atol=0):
        raise AssertionError("meta-graph row sums differ from cluster volumes")
    return M


def meta_graph_from_edges(k: int, edges) -> MetaGraph:
    """Unit- or custom-weight meta-graph from ``(i, j[, w])`` pairs."""
    A = np.zeros((k, k))
    for e in edges:
        i, j = int(e[0]), int(e[1])
        w = float(e[2]) if len(e) > 2 else 1.0
        if i == j:
            A[i, i] += 2 * w
        else:
            A[i, j] += w
            A[j, i] += w
    return MetaGraph(A)


@dataclass(frozen=True)
class MetaEmbedding:
    """Bottom ``l`` eigenpairs of the meta Laplacian; row ``i`` of ``vectors``
    is the embedded point of meta-vertex ``i``."""

    l: int
    gamma: np.ndarray
    vectors: np.ndarray  # (k, l), orthonormal columns g_1..g_l

    @property
    def points(self) -> np.ndarray:
        return self.vectors

    @property
    def k(self) -> int:
        return self.vectors.shape[0]


def meta_embedding(M: MetaGraph, l: int) -> MetaEmbedding:
    if not 1 <= l <= M.k:
        raise BadL(f"need 1 <= l <= k, got l={l}, k={M.k}")
    eig = bottom_eigenpairs(M.normalized_laplacian(), l, method="dense")
    return MetaEmbedding(l=l, gamma=np.array(eig.values), vectors=np.array(eig.vectors))


@dataclass(frozen=True)
class Distinguishability:
    theta: float
    min_norm_sq: float
    min_separation_sq: float
    argmin_pair: tuple


def distinguishability_theta(ME: MetaEmbedding) -> Distinguishability:
    """Largest ``theta`` such that the embedding is ``(theta, l)``-distinguishable.

    That is the smaller of the minimum squared norm of the points and the
    minimum squared distance between normalised points. Both components are
    reported.
    """
    X = np.asarray(ME.points, dtype=float)
    k = X.shape[0]
    if k < 2:
        raise InvalidK("distinguishability needs k >= 2")
    norms_sq = (X * X).sum(1)
    zero = np.flatnonzero(norms_sq <= 1e-24)
    if zero.size:
        raise ZeroEmbeddingNorm(f"meta-vertex {zero[0]} has zero embedding norm for l={ME.l}")
    U = X / np.sqrt(norms_sq)[:, None]
    D = ((U[:, None, :] - U[None, :, :]) ** 2).sum(-1)
    D[np.diag_indices(k)] = np.inf
    flat = int(np.argmin(D))
    i, j = divmod(flat, k)
    sep = float(D[i, j])
    min_norm = float(norms_sq.min())
    return Distinguishability(theta=min(min_norm, sep), min_norm_sq=min_norm,
                              min_separation_sq=sep, argmin_pair=(min(i, j), max(i, j)))


def blow_up(G: WeightedGraph, clustering: Clustering, meta_vectors) -> np.ndarray:
    """Lift ``k``-vectors to ``n``-vectors: ``u in S_j -> sqrt(deg(u)/vol(S_j)) g(j)``."""
    g = np.asarray(meta_vectors, dtype=float)
    if g.ndim == 1:
        g = g[:, None]
    vol = clustering.volumes(G)
    scale = np.sqrt(G.degree / vol[clustering.labels])
    return scale[:, None] * g[clustering.labels]


def normalized_indicators(G: WeightedGraph, clustering: Clustering) -> np.ndarray:
    """Columns ``D^{1/2} chi_i / ||D^{1/2} chi_i||``."""
    return blow_up(G, clustering, np.eye(clustering.k))


@dataclass(frozen=True)
class UpsilonResult:
    """Ratio of ``lambda_{k+1}`` to a k-way expansion value.

    ``value`` uses the supplied partition's largest conductance in place of
    ``rho(k)``, which can only under-estimate the true ratio. ``exact_value``
    is filled for graphs small enough for brute force.
    """

    value: float
    lambda_next: float
    max_conductance: float
    exact_rho: float | None = None
    exact_value: float | None = None

    @property
    def infinite(self) -> bool:
        return np.isinf(self.value)

    @property
    def partition_is_optimal(self) -> bool:
        if self.max_conductance == 0:
            return True  # no partition can beat zero conductance
        return self.exact_rho is not None and np.isclose(self.exact_rho, self.max_conductance,
                                                        rtol=1e-12, atol=1e-14)

    @property
    def best_value(self) -> float:
        """Exact ratio when brute force ran, otherwise the surrogate."""
        return self.exact_value if self.exact_value is not None else self.value


def _ratio(num, den):
    return float("inf") if den <= 0 else float(num / den)


def graph_eigen(G: WeightedGraph, count: int, seed: int = 0) -> EigenPairs:
    return bottom_eigenpairs(G.normalized_laplacian(), min(count, G.n), seed=seed)


def upsilon(G: WeightedGraph, clustering: Clustering, eigen: EigenPairs | None = None,
            seed: int = 0, exact: bool = True) -> UpsilonResult:
    k = clustering.k
    if k >= G.n:
        raise InvalidK(f"need k < n, got k={k}, n={G.n}")
    if eigen is None or len(eigen) < k + 1:
        eigen = graph_eigen(G, k + 1, seed)
    lam = float(eigen.values[k])
    phi = float(clustering.conductances(G).max())
    exact_rho = exact_value = None
    if exact and G.n <= BRUTE_FORCE_LIMIT and k >= 2:
        exact_rho, _ = k_way_expansion_bruteforce(G, k)
        exact_value = _ratio(lam, exact_rho)
    return UpsilonResult(value=_ratio(lam, phi), lambda_next=lam, max_conductance=phi,
                         exact_rho=exact_rho, exact_value=exact_value)


def psi(G: WeightedGraph, clustering: Clustering, l: int, eigen: EigenPairs | None = None,
        meta: MetaEmbedding | None = None, seed: int = 0) -> float:
    """Sum of the bottom ``l`` meta eigenvalues divided by ``lambda_{l+1}`` of ``G``."""
    if not 1 <= l < G.n or l > clustering.k:
        raise BadL(f"need 1 <= l <= k and l < n, got l={l}")
    if eigen is None or len(eigen) < l + 1:
        eigen = graph_eigen(G, l + 1, seed)
    lam = float(eigen.values[l])
    if lam <= ZERO_EIGENVALUE:
        raise ZeroDenominator(f"lambda_{l + 1} = {lam:.3e} is numerically zero")
    if meta is None or meta.l < l:
        meta = meta_embedding(build_meta_graph(G, clustering), l)
    gamma = np.clip(meta.gamma[:l], 0.0, None)
    return float(gamma.sum() / lam)


def rotate_within_blocks(ME: MetaEmbedding, rng, tol: float = 1e-9) -> MetaEmbedding:
    """Apply a random orthogonal rotation inside each degenerate eigenvalue block.

    Blocks that straddle the ``l`` boundary are left alone since the basis
    there is not determined by the first ``l`` eigenvalues.
    """
    V = np.array(ME.vectors)
    gamma = ME.gamma
    start = 0
    while start < ME.l:
        stop = start + 1
        while stop < ME.l and abs(gamma[stop] - gamma[start]) <= tol:
            stop += 1
        size = stop - start
        if size > 1:
            Q, _ = np.linalg.qr(rng.standard_normal((size, size)))
            V[:, start:stop] = V[:, start:stop] @ Q
        start = stop
    return MetaEmbedding(l=ME.l, gamma=gamma.copy(), vectors=V)

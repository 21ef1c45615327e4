"""Bottom eigenpairs of symmetric PSD operators.

Small problems use a dense symmetric solve. Larger ones run ARPACK's
implicitly restarted Lanczos on the shifted operator ``2I - N``, whose top
eigenvalues are the bottom eigenvalues of ``N``, followed by a Rayleigh-Ritz
refinement that restores orthonormality inside degenerate blocks.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import ArpackNoConvergence, LinearOperator, eigsh

from .errors import BadL, NoConvergence

DENSE_CUTOFF = 512
DEFAULT_TOL = 1e-8


@dataclass(frozen=True)
class EigenPairs:
    values: np.ndarray  # ascending, shape (l,)
    vectors: np.ndarray  # orthonormal columns, shape (n, l)
    residuals: np.ndarray  # ||N f_i - lambda_i f_i||, shape (l,)

    def __len__(self):
        return self.values.size

    def head(self, l: int) -> "EigenPairs":
        """The first ``l`` pairs."""
        return EigenPairs(self.values[:l], self.vectors[:, :l], self.residuals[:l])


def _as_operator(operator):
    """Return ``(matmat, dense_fn, n)`` for the supported operator kinds."""
    if hasattr(operator, "normalized_adjacency"):  # NormalizedLaplacian
        n = operator.n
        return operator.matvec, operator.to_dense, n
    if sp.issparse(operator):
        A = operator.tocsr()
        return (lambda x: A @ x), A.toarray, A.shape[0]
    A = np.asarray(operator, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("operator must be square")
    return (lambda x: A @ x), (lambda: A), A.shape[0]


def fix_signs(vectors: np.ndarray) -> np.ndarray:
    """Flip each column so its largest-magnitude entry is positive."""
    out = np.array(vectors, dtype=float, copy=True)
    if out.size == 0:
        return out
    idx = np.argmax(np.abs(out), axis=0)
    signs = np.sign(out[idx, np.arange(out.shape[1])])
    signs[signs == 0] = 1.0
    return out * signs


def _residuals(matmat, values, vectors):
    R = matmat(vectors) - vectors * values
    return np.linalg.norm(R, axis=0)


def _dense(dense_fn, l):
    M = np.asarray(dense_fn(), dtype=float)
    M = (M + M.T) / 2
    vals, vecs = np.linalg.eigh(M)
    return vals[:l], vecs[:, :l]


def _lanczos(matmat, n, l, tol, seed, ncv=None):
    # 2I - N has spectrum in [0, 2] for normalised Laplacians; its largest
    # algebraic eigenvalues are the smallest of N
    shifted = LinearOperator((n, n), matvec=lambda x: 2.0 * x - matmat(x),
                             matmat=lambda X: 2.0 * X - matmat(X), dtype=float)
    rng = np.random.default_rng(seed)
    v0 = rng.standard_normal(n)
    extra = min(n - 1, l + 2)  # a little slack for degenerate blocks at the boundary
    if ncv is None:
        ncv = min(n, max(2 * extra + 1, 24))
    vals, vecs = eigsh(shifted, k=extra, which="LA", v0=v0, ncv=ncv,
                       tol=min(tol, 1e-10) * 1e-2, maxiter=100 * l)
    vals = 2.0 - vals
    # Rayleigh-Ritz on the computed subspace
    Q, _ = np.linalg.qr(vecs)
    H = Q.T @ matmat(Q)
    H = (H + H.T) / 2
    theta, Y = np.linalg.eigh(H)
    order = np.argsort(theta, kind="stable")[:l]
    return theta[order], Q @ Y[:, order]


def bottom_eigenpairs(operator, l: int, tol: float = DEFAULT_TOL, seed: int = 0,
                      method: str = "auto") -> EigenPairs:
    """Smallest ``l`` eigenpairs of a symmetric positive semidefinite operator.

    ``operator`` may be a :class:`~metaspectral.graph.NormalizedLaplacian`, a
    scipy sparse matrix or a dense array. ``method`` is ``"auto"`` (dense when
    ``n <= 512``), ``"dense"`` or ``"lanczos"``. The Lanczos path assumes the
    spectrum lies in ``[0, 2]``.

    Every returned pair satisfies ``||N f - lambda f|| <= tol * max(1, lambda_l)``
    or :class:`NoConvergence` is raised.
    """
    matmat, dense_fn, n = _as_operator(operator)
    if not isinstance(l, (int, np.integer)) or not 1 <= l <= n:
        raise BadL(f"need 1 <= l <= n, got l={l}, n={n}")
    if tol <= 0:
        raise ValueError("tol must be positive")
    if method not in ("auto", "dense", "lanczos"):
        raise ValueError(f"unknown method {method!r}")
    use_dense = method == "dense" or (method == "auto" and n <= DENSE_CUTOFF)
    if not use_dense and l + 3 > n:
        use_dense = True

    if use_dense:
        values, vectors = _dense(dense_fn, l)
    else:
        attempts = [None, min(n, max(4 * l + 8, 48)), min(n, max(8 * l + 16, 96))]
        values = vectors = None
        last_residual = np.inf
        for ncv in attempts:
            try:
                values, vectors = _lanczos(matmat, n, l, tol, seed, ncv=ncv)
            except ArpackNoConvergence:
                continue
            res = _residuals(matmat, values, vectors)
            last_residual = float(res.max())
            if last_residual <= tol * max(1.0, float(values[-1])):
                break
            values = None
        if values is None:
            raise NoConvergence(
                f"Lanczos failed to reach tol={tol} for l={l}",
                iterations=100 * l, worst_residual=last_residual)

    vectors = fix_signs(vectors)
    residuals = _residuals(matmat, values, vectors)
    worst = float(residuals.max())
    if worst > tol * max(1.0, float(values[-1])):
        raise NoConvergence(f"worst residual {worst:.3e} exceeds tolerance", worst_residual=worst)
    values = np.asarray(values, dtype=float)
    for a in (values, vectors, residuals):
        a.setflags(write=False)
    return EigenPairs(values=values, vectors=vectors, residuals=residuals)

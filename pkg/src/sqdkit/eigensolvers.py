"""Lowest-eigenpair solvers: dense reference and Davidson iteration.

The Davidson solver grows an orthonormal search space from preconditioned
residuals (diagonal preconditioner with a singularity guard) and collapses
back to the best Ritz vectors when the space hits its cap.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DENSE_LIMIT = 512
SEARCH_CAP = 24
RESTART_SIZE = 4
PRECOND_GUARD = 1e-8


class SymmetricOperator:
    """Real symmetric operator: dense array or matvec callback + diagonal."""

    def __init__(self, dim, dense=None, matvec=None, diagonal=None):
        self.dim = dim
        self._dense = dense
        self._matvec = matvec
        self._diagonal = diagonal
        if dense is None and (matvec is None or diagonal is None):
            raise ValueError("need a dense array or matvec plus diagonal")

    @classmethod
    def from_dense(cls, mat) -> "SymmetricOperator":
        mat = np.asarray(mat, dtype=float)
        return cls(mat.shape[0], dense=mat)

    @classmethod
    def from_projected(cls, ham) -> "SymmetricOperator":
        if ham.is_dense:
            return cls(ham.dim, dense=ham.as_dense())
        return cls(ham.dim, matvec=ham.matvec, diagonal=ham.diagonal())

    @property
    def is_dense(self):
        return self._dense is not None

    def dense(self) -> np.ndarray:
        if self._dense is None:
            raise ValueError("operator is matrix-free")
        return self._dense

    def matvec(self, v):
        if self._dense is not None:
            return self._dense @ v
        return self._matvec(v)

    def diagonal(self):
        if self._diagonal is not None:
            return np.asarray(self._diagonal, dtype=float)
        return np.diagonal(self._dense).copy()

    def check_symmetry(self, n_probes=4, seed=0, tol=1e-8):
        """Probe <u, Av> = <Au, v> on random vectors; returns max residual."""
        rng = np.random.default_rng(seed)
        worst = 0.0
        for _ in range(n_probes):
            u = rng.normal(size=self.dim)
            v = rng.normal(size=self.dim)
            av = self.matvec(v)
            au = self.matvec(u)
            scale = max(np.linalg.norm(av), np.linalg.norm(au), 1.0)
            worst = max(worst, abs(u @ av - au @ v) / scale)
        if worst > tol:
            raise ValueError(f"operator not symmetric: probe residual {worst:.2e}")
        return worst


def _fix_sign(vec):
    k = int(np.argmax(np.abs(vec)))
    return -vec if vec[k] < 0 else vec


def dense_lowest_eigenpair(op, dense_limit: int = DENSE_LIMIT):
    """Lowest eigenpair of a dense symmetric matrix (reference solver)."""
    mat = op.dense() if isinstance(op, SymmetricOperator) else np.asarray(op, float)
    if mat.shape[0] > dense_limit:
        raise ValueError(f"dimension {mat.shape[0]} over dense limit {dense_limit}")
    vals, vecs = np.linalg.eigh(mat)
    vec = _fix_sign(vecs[:, 0])
    return float(vals[0]), vec


@dataclass
class DavidsonResult:
    value: float
    vector: np.ndarray
    n_iterations: int
    converged: bool
    residual_norm: float


def davidson_lowest_eigenpair(op, guess=None, tol: float = 1e-9,
                              max_iter: int = 200,
                              search_cap: int = SEARCH_CAP,
                              restart_size: int = RESTART_SIZE) -> DavidsonResult:
    """Davidson iteration for the lowest eigenpair of a symmetric operator.

    Rayleigh-Ritz over a growing orthonormal space; the residual is
    preconditioned by (diag - lambda)^-1 with denominators clamped to a
    sign-preserving ``PRECOND_GUARD``.  When the search space exceeds
    ``search_cap`` it collapses to the best ``restart_size`` Ritz vectors.
    Non-convergence returns the best estimate with ``converged=False``.
    """
    if not isinstance(op, SymmetricOperator):
        op = SymmetricOperator.from_dense(op)
    dim = op.dim
    diag = op.diagonal()
    if dim == 1:
        v = np.ones(1)
        return DavidsonResult(float(diag[0]), v, 0, True, 0.0)

    if guess is None:
        guess = np.zeros(dim)
        guess[int(np.argmin(diag))] = 1.0
    basis = np.empty((dim, 0))
    sigma = np.empty((dim, 0))
    new_vec = guess / np.linalg.norm(guess)
    theta = 0.0
    ritz = new_vec
    for it in range(1, max_iter + 1):
        # orthonormalize the candidate against the basis (twice, for safety)
        for _ in range(2):
            if basis.shape[1]:
                new_vec = new_vec - basis @ (basis.T @ new_vec)
        norm = np.linalg.norm(new_vec)
        if norm < 1e-12:
            # stagnated direction; perturb deterministically
            new_vec = np.zeros(dim)
            new_vec[(it * 37) % dim] = 1.0
            if basis.shape[1]:
                new_vec -= basis @ (basis.T @ new_vec)
            norm = np.linalg.norm(new_vec)
            if norm < 1e-12:
                break
        new_vec = new_vec / norm
        basis = np.column_stack([basis, new_vec])
        sigma = np.column_stack([sigma, op.matvec(new_vec)])

        small = basis.T @ sigma
        small = 0.5 * (small + small.T)
        vals, vecs = np.linalg.eigh(small)
        theta = float(vals[0])
        ritz = basis @ vecs[:, 0]
        residual = sigma @ vecs[:, 0] - theta * ritz
        rnorm = float(np.linalg.norm(residual))
        if rnorm < tol:
            return DavidsonResult(theta, _fix_sign(ritz), it, True, rnorm)

        denom = diag - theta
        small_d = np.abs(denom) < PRECOND_GUARD
        denom[small_d] = np.where(denom[small_d] < 0, -PRECOND_GUARD,
                                  PRECOND_GUARD)
        new_vec = residual / denom

        if basis.shape[1] >= search_cap:
            keep = min(restart_size, basis.shape[1])
            basis = basis @ vecs[:, :keep]
            sigma = sigma @ vecs[:, :keep]

    return DavidsonResult(theta, _fix_sign(ritz), max_iter, False,
                          float(np.linalg.norm(op.matvec(ritz) - theta * ritz)))


def lowest_eigenpair(op, guess=None, tol: float = 1e-9,
                     dense_limit: int = DENSE_LIMIT):
    """Dense solve below ``dense_limit``, Davidson above."""
    if not isinstance(op, SymmetricOperator):
        op = SymmetricOperator.from_dense(op)
    if op.is_dense and op.dim <= dense_limit:
        return dense_lowest_eigenpair(op, dense_limit)
    res = davidson_lowest_eigenpair(op, guess=guess, tol=tol)
    return res.value, res.vector

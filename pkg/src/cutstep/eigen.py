"""Largest eigenvalue of the pencil K v = lambda M v and the critical step.

The stability limit of central-difference time stepping is
dt_crit = 2 / sqrt(lambda_max). Small systems go through a dense
symmetric-definite solve; assembled grids use a Lanczos iteration on the
M-inner-product operator inv(M) K with full reorthogonalization.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
import scipy.sparse.linalg as spla

__all__ = [
    "SpectrumResult",
    "DefinitenessError",
    "EigenConvergenceError",
    "max_eig_dense",
    "max_eig_iterative",
    "critical_dt",
]


class DefinitenessError(ValueError):
    """Mass matrix is not symmetric positive definite."""


class EigenConvergenceError(RuntimeError):
    """Iteration did not converge; carries the best available estimate."""

    def __init__(self, lambda_best: float, residual: float, iterations: int):
        self.lambda_best = lambda_best
        self.residual = residual
        self.iterations = iterations
        super().__init__(
            f"no convergence after {iterations} iterations "
            f"(best lambda {lambda_best:.6e}, residual {residual:.3e})"
        )


@dataclass(frozen=True)
class SpectrumResult:
    lambda_max: float
    residual: float
    iterations: int


def _pencil_residual(M, K, lam: float, v: np.ndarray) -> float:
    mv = M @ v
    return float(np.linalg.norm(K @ v - lam * mv) / (lam * np.linalg.norm(mv)))


def max_eig_dense(M, K) -> SpectrumResult:
    """Largest eigenvalue of the symmetric-definite pencil, dense path.

    Reduces to a standard symmetric problem through the Cholesky factor of
    M (LAPACK generalized driver), computes the full spectrum and returns
    the maximum together with its 2-norm residual.
    """
    M = np.asarray(M.toarray() if sp.issparse(M) else M, dtype=float)
    K = np.asarray(K.toarray() if sp.issparse(K) else K, dtype=float)
    if M.ndim == 1:
        M = np.diag(M)
    try:
        values, vectors = sla.eigh(K, M)
    except np.linalg.LinAlgError as err:
        raise DefinitenessError(f"mass matrix is not positive definite: {err}") from err
    lam = float(values[-1])
    v = vectors[:, -1]
    return SpectrumResult(lam, _pencil_residual(M, K, lam, v), 0)


def _mass_solver(M):
    """Factorized solve with M (sparse LU or dense Cholesky)."""
    if sp.issparse(M):
        return spla.factorized(M.tocsc())
    chol = sla.cho_factor(np.asarray(M, dtype=float))
    return lambda b: sla.cho_solve(chol, b)


def max_eig_iterative(system, K=None, tol: float = 1e-9, max_iter: int = 5000) -> SpectrumResult:
    """Largest pencil eigenvalue by Lanczos on inv(M) K, M-inner product.

    Accepts a GlobalSystem or an explicit (M, K) pair. Inner solves with M
    use a sparse factorization; Lanczos vectors are fully reorthogonalized.
    Converged when successive estimates differ by less than tol relative
    and the explicit pencil residual is below tol. The start vector is the
    M-normalized all-ones vector, so runs are reproducible; a breakdown
    restarts from a deterministic perturbation.
    """
    if K is None:
        M, K = system.M, system.K
    else:
        M = system
    n = M.shape[0]
    solve = _mass_solver(M)

    def m_dot(x):
        return M @ x

    q = np.ones(n)
    basis_q = []  # Lanczos vectors
    basis_mq = []  # M times Lanczos vectors (for M-inner products)
    alphas: list[float] = []
    betas: list[float] = []

    mq = m_dot(q)
    q = q / np.sqrt(q @ mq)
    mq = m_dot(q)

    lam_prev = np.inf
    lam = 0.0
    restart_axis = 0
    for j in range(max_iter):
        basis_q.append(q)
        basis_mq.append(mq)
        kq = K @ q
        alphas.append(float(q @ kq))
        w = solve(kq)
        # two-pass M-orthogonalization against all previous vectors
        for _ in range(2):
            mw = m_dot(w)
            coeffs = np.array([bq @ w for bq in basis_mq])
            w = w - np.column_stack(basis_q) @ coeffs
        mw = m_dot(w)
        beta = float(np.sqrt(max(w @ mw, 0.0)))
        if beta < 1e-14:
            # invariant subspace hit; deterministic perturbed restart
            w = np.zeros(n)
            w[restart_axis % n] = 1.0
            restart_axis += 1
            for _ in range(2):
                mw = m_dot(w)
                coeffs = np.array([bq @ w for bq in basis_mq])
                w = w - np.column_stack(basis_q) @ coeffs
            mw = m_dot(w)
            beta = float(np.sqrt(max(w @ mw, 0.0)))
            if beta < 1e-14:
                lam = _tridiag_max(alphas, betas[: len(alphas) - 1])
                v = _ritz_vector(basis_q, alphas, betas[: len(alphas) - 1])
                return SpectrumResult(lam, _pencil_residual(M, K, lam, v), j + 1)
            betas.append(0.0)  # decoupled block
            q = w / beta
            mq = mw / beta
            continue
        betas.append(beta)
        q = w / beta
        mq = mw / beta

        lam = _tridiag_max(alphas, betas[:-1])
        if j >= 1 and abs(lam - lam_prev) < tol * abs(lam):
            v = _ritz_vector(basis_q, alphas, betas[:-1])
            residual = _pencil_residual(M, K, lam, v)
            if residual < tol:
                return SpectrumResult(lam, residual, j + 1)
        lam_prev = lam

    v = _ritz_vector(basis_q, alphas, betas[: len(alphas) - 1])
    raise EigenConvergenceError(lam, _pencil_residual(M, K, lam, v), max_iter)


def _tridiag_max(alphas: list[float], betas: list[float]) -> float:
    if len(alphas) == 1:
        return alphas[0]
    values = sla.eigvalsh_tridiagonal(np.array(alphas), np.array(betas))
    return float(values[-1])


def _ritz_vector(basis_q: list[np.ndarray], alphas: list[float], betas: list[float]) -> np.ndarray:
    if len(alphas) == 1:
        return basis_q[0]
    values, vectors = sla.eigh_tridiagonal(np.array(alphas), np.array(betas))
    return np.column_stack(basis_q) @ vectors[:, -1]


def critical_dt(lambda_max):
    """Critical central-difference time step 2 / sqrt(lambda_max)."""
    lam = np.asarray(lambda_max, dtype=float)
    if np.any(lam <= 0.0):
        raise ValueError("critical time step requires lambda_max > 0")
    dt = 2.0 / np.sqrt(lam)
    return float(dt) if np.isscalar(lambda_max) or lam.ndim == 0 else dt

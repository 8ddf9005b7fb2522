"""Sparse block-Toeplitz inverse covariance estimation via ADMM.

Solves, for an empirical covariance ``S`` of stacked windows,

    minimize  -logdet(Theta) + tr(S Theta) + lam * ||Theta||_1
    subject to Theta block-Toeplitz (w x w blocks of size ``block``)

with the split ``X = Z``: the X-update is the log-det proximal step (closed form
through an eigendecomposition), the Z-update averages tied entries across each
block diagonal and soft-thresholds them.
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy import linalg

from ..core.exceptions import NotPositiveDefinite
from ..utils.logging import LoggerMixin

RIDGE = 1e-6
MAX_RIDGE_ATTEMPTS = 60


def soft_threshold(values: np.ndarray, threshold: float) -> np.ndarray:
    return np.sign(values) * np.maximum(np.abs(values) - threshold, 0.0)


def toeplitz_project(matrix: np.ndarray, block: int) -> np.ndarray:
    """Nearest (Frobenius) symmetric block-Toeplitz matrix.

    Blocks ``(l, l+o)`` are replaced by their average over ``l``; lower blocks are
    the transposes of the upper ones.
    """
    p = matrix.shape[0]
    if p % block:
        raise ValueError(f"Matrix size {p} is not a multiple of block size {block}")
    w = p // block
    sym = 0.5 * (matrix + matrix.T)
    out = np.empty_like(sym)
    for offset in range(w):
        blocks = [sym[l * block:(l + 1) * block, (l + offset) * block:(l + offset + 1) * block]
                  for l in range(w - offset)]
        avg = np.mean(blocks, axis=0)
        if offset == 0:
            avg = 0.5 * (avg + avg.T)
        for l in range(w - offset):
            rows = slice(l * block, (l + 1) * block)
            cols = slice((l + offset) * block, (l + offset + 1) * block)
            out[rows, cols] = avg
            out[cols, rows] = avg.T
    return out


def is_positive_definite(matrix: np.ndarray) -> bool:
    try:
        linalg.cho_factor(matrix, lower=True)
    except linalg.LinAlgError:
        return False
    return True


def ensure_positive_definite(matrix: np.ndarray) -> Tuple[np.ndarray, float]:
    """Add a growing ridge ``c * I`` until a Cholesky factorization succeeds.

    A multiple of the identity keeps the block-Toeplitz structure intact.

    Returns:
        The (possibly) ridged matrix and the total ridge added

    Raises:
        NotPositiveDefinite: If no ridge up to the attempt limit suffices
    """
    if np.all(np.isfinite(matrix)) and is_positive_definite(matrix):
        return matrix, 0.0
    if not np.all(np.isfinite(matrix)):
        raise NotPositiveDefinite("Matrix contains non-finite entries")
    ridge = RIDGE
    identity = np.eye(matrix.shape[0])
    for _ in range(MAX_RIDGE_ATTEMPTS):
        candidate = matrix + ridge * identity
        if is_positive_definite(candidate):
            return candidate, ridge
        ridge *= 2.0
    raise NotPositiveDefinite(f"Matrix is not positive definite even with ridge {ridge:g}")


@dataclass
class ToeplitzFit:
    """Outcome of one ADMM solve."""

    precision: np.ndarray
    converged: bool
    iterations: int
    primal_residual: float
    dual_residual: float
    ridge: float = 0.0


class ToeplitzGraphicalLasso(LoggerMixin):
    """ADMM solver for the block-Toeplitz graphical lasso.

    Args:
        block: Block size (the action dimension ``d``)
        window: Number of blocks per side (``w``)
        lam: L1 weight on every entry of the precision matrix
        rho: ADMM penalty parameter
        max_iters: Iteration limit
        tol: Absolute and relative residual tolerance
    """

    def __init__(self, block: int, window: int, lam: float, rho: float = 1.0,
                 max_iters: int = 200, tol: float = 1e-4):
        self.block = block
        self.window = window
        self.lam = lam
        self.rho = rho
        self.max_iters = max_iters
        self.tol = tol

    @property
    def dim(self) -> int:
        return self.block * self.window

    def _x_update(self, S: np.ndarray, Z: np.ndarray, U: np.ndarray) -> np.ndarray:
        eigvals, eigvecs = linalg.eigh(self.rho * (Z - U) - S)
        scaled = (eigvals + np.sqrt(eigvals ** 2 + 4.0 * self.rho)) / (2.0 * self.rho)
        X = (eigvecs * scaled) @ eigvecs.T
        return 0.5 * (X + X.T)

    def _z_update(self, X: np.ndarray, U: np.ndarray) -> np.ndarray:
        return soft_threshold(toeplitz_project(X + U, self.block), self.lam / self.rho)

    def fit(self, S: np.ndarray) -> ToeplitzFit:
        """Estimate the precision matrix for covariance ``S``.

        The returned matrix is symmetric, exactly block-Toeplitz and positive
        definite. A solve that hits ``max_iters`` is logged as a warning and the
        last iterate is returned.
        """
        S = 0.5 * (np.asarray(S, dtype=float) + np.asarray(S, dtype=float).T)
        p = S.shape[0]
        if p != self.dim:
            raise ValueError(f"Covariance is {p}x{p}, expected {self.dim}x{self.dim}")

        X = np.zeros((p, p))
        Z = np.zeros((p, p))
        U = np.zeros((p, p))
        converged = False
        primal = dual = float("inf")
        iteration = 0

        for iteration in range(1, self.max_iters + 1):
            X = self._x_update(S, Z, U)
            Z_old = Z
            Z = self._z_update(X, U)
            U = U + X - Z

            primal = float(np.linalg.norm(X - Z))
            dual = float(self.rho * np.linalg.norm(Z - Z_old))
            eps_primal = p * self.tol + self.tol * max(np.linalg.norm(X), np.linalg.norm(Z))
            eps_dual = p * self.tol + self.tol * float(np.linalg.norm(self.rho * U))
            if primal <= eps_primal and dual <= eps_dual:
                converged = True
                break

        if not converged:
            self.logger.warning(
                "ADMM did not converge in %d iterations (primal %.3g, dual %.3g); using last iterate",
                self.max_iters, primal, dual)

        if is_positive_definite(Z):
            precision, ridge = Z, 0.0
        else:
            precision, ridge = ensure_positive_definite(toeplitz_project(X, self.block))
            if ridge > 0:
                self.logger.debug("Added ridge %.3g to restore positive definiteness", ridge)

        return ToeplitzFit(
            precision=precision,
            converged=converged,
            iterations=iteration,
            primal_residual=primal,
            dual_residual=dual,
            ridge=ridge,
        )

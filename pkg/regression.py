"""Least squares via column-pivoted QR, with row-scaled weights and an LU cross-check."""

import logging
from dataclasses import dataclass

import numpy as np
from scipy import linalg

from errors import RankDeficiencyError

logger = logging.getLogger(__name__)

# Relative pivot size below which a design column is treated as dependent.
RANK_TOL = 1e-12


@dataclass(frozen=True)
class LeastSquaresFit:
    """Coefficients and diagnostics from one least squares solve."""
    coef: np.ndarray
    fitted: np.ndarray
    residuals: np.ndarray
    rank: int
    cond: float


def qr_lstsq(design: np.ndarray, y: np.ndarray, weights: np.ndarray | None = None,
             label: str = "design") -> LeastSquaresFit:
    """Solve min ||W^½(y - Xb)|| by Householder QR with column pivoting.

    Weighted problems scale each row by sqrt(weight) before factorizing.
    Raises RankDeficiencyError when the design is rank deficient.
    """
    X = np.asarray(design, dtype=float)
    y = np.asarray(y, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    n, k = X.shape
    if n < k:
        raise RankDeficiencyError(f"{label}: {n} rows for {k} coefficients")

    if weights is not None:
        w = np.asarray(weights, dtype=float)
        if np.any(w < 0) or not np.all(np.isfinite(w)):
            raise ValueError("weights must be finite and nonnegative")
        root = np.sqrt(w)
        Xs, ys = X * root[:, None], y * root
    else:
        Xs, ys = X, y

    q, r, piv = linalg.qr(Xs, mode="economic", pivoting=True)
    diag = np.abs(np.diag(r))
    rank = int(np.sum(diag > RANK_TOL * diag[0])) if diag.size and diag[0] > 0 else 0
    if rank < k:
        raise RankDeficiencyError(f"{label}: rank {rank} < {k} columns")

    cond = float(diag[0] / diag[-1])
    coef_piv = linalg.solve_triangular(r, q.T @ ys)
    coef = np.empty(k)
    coef[piv] = coef_piv

    fitted = X @ coef
    logger.debug("%s: n=%d k=%d cond=%.3g", label, n, k, cond)
    return LeastSquaresFit(coef=coef, fitted=fitted, residuals=y - fitted, rank=rank, cond=cond)


def lu_solve(matrix: np.ndarray, rhs: np.ndarray, label: str = "matrix") -> np.ndarray:
    """Solve a square system by LU with partial pivoting."""
    A = np.asarray(matrix, dtype=float)
    lu, piv = linalg.lu_factor(A, check_finite=True)
    pivots = np.abs(np.diag(lu))
    if pivots.min() <= RANK_TOL * max(pivots.max(), 1.0):
        raise RankDeficiencyError(f"{label} is singular")
    return linalg.lu_solve((lu, piv), np.asarray(rhs, dtype=float))


def spd_inverse(matrix: np.ndarray, label: str = "matrix") -> np.ndarray:
    """Inverse of a symmetric positive definite matrix through its Cholesky factor."""
    A = np.asarray(matrix, dtype=float)
    try:
        factor = linalg.cho_factor(A)
    except linalg.LinAlgError as exc:
        raise RankDeficiencyError(f"{label} is singular") from exc
    inverse = linalg.cho_solve(factor, np.eye(A.shape[0]))
    if np.linalg.cond(A) > 1.0 / RANK_TOL:
        raise RankDeficiencyError(f"{label} is numerically singular")
    return inverse

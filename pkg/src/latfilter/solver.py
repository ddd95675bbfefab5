"""Sparse symmetric positive-definite systems and their solvers."""

import logging

import numpy as np
import scipy.sparse as sp
from pydantic import BaseModel, ConfigDict, model_validator
from scipy.sparse.linalg import cg

from .config import settings
from .errors import ConfigurationError, NumericError, SolverError

logger = logging.getLogger(__name__)


class SparseSystem(BaseModel):
    """A CSR matrix ``A`` and a right-hand side ``b`` of ``A x = b``."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    matrix: sp.csr_matrix
    rhs: np.ndarray

    @model_validator(mode="after")
    def _check_structure(self) -> "SparseSystem":
        n_rows, n_cols = self.matrix.shape
        if n_rows != n_cols:
            raise ValueError(f"matrix must be square, got {n_rows}x{n_cols}")
        if self.rhs.shape != (n_rows,):
            raise ValueError(f"rhs must have shape ({n_rows},), got {self.rhs.shape}")
        if not (np.all(np.isfinite(self.matrix.data)) and np.all(np.isfinite(self.rhs))):
            raise ValueError("system contains non-finite values")
        pattern = (self.matrix != 0).astype(np.int8)
        if (pattern != pattern.T).nnz:
            raise ValueError("matrix is not structurally symmetric")
        return self

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @property
    def row_offsets(self) -> np.ndarray:
        return self.matrix.indptr

    @property
    def column_indices(self) -> np.ndarray:
        return self.matrix.indices

    @property
    def values(self) -> np.ndarray:
        return self.matrix.data


def spmv(matrix: sp.spmatrix, x: np.ndarray) -> np.ndarray:
    """Return ``matrix @ x``."""
    if matrix.shape[1] != x.shape[0]:
        raise ConfigurationError(
            f"dimension mismatch: matrix is {matrix.shape[0]}x{matrix.shape[1]}, "
            f"vector has length {x.shape[0]}"
        )
    return matrix @ x


def relative_residual(system: SparseSystem, x: np.ndarray) -> float:
    """``||A x - b|| / ||b||`` (absolute residual when ``b`` is zero)."""
    residual = np.linalg.norm(spmv(system.matrix, x) - system.rhs)
    norm_b = np.linalg.norm(system.rhs)
    return float(residual / norm_b) if norm_b > 0 else float(residual)


def solve_pcg(
    system: SparseSystem, tol: float | None = None, max_iter: int | None = None
) -> tuple[np.ndarray, float, int]:
    """Jacobi-preconditioned conjugate gradient.

    Returns:
        ``(x, relative residual, iterations)``.

    Raises:
        SolverError: If the tolerance is not reached within ``max_iter`` iterations.
        NumericError: If the iteration produced non-finite values.
    """
    tol = settings.pcg_tolerance if tol is None else tol
    max_iter = settings.pcg_max_iter_factor * system.n if max_iter is None else max_iter
    if tol <= 0:
        raise ConfigurationError(f"tolerance must be positive, got {tol}")

    diagonal = system.matrix.diagonal()
    if np.any(diagonal <= 0):
        raise NumericError("matrix has a non-positive diagonal entry; it is not SPD")
    preconditioner = sp.diags(1.0 / diagonal, format="csr")

    iterations = 0

    def count(_xk: np.ndarray) -> None:
        nonlocal iterations
        iterations += 1

    x, info = cg(
        system.matrix,
        system.rhs,
        rtol=tol,
        atol=0.0,
        maxiter=max_iter,
        M=preconditioner,
        callback=count,
    )
    if not np.all(np.isfinite(x)):
        raise NumericError("conjugate gradient produced non-finite values")

    residual = relative_residual(system, x)
    if info != 0:
        logger.error(f"PCG did not converge: residual {residual:.3e} after {iterations} iterations")
        raise SolverError("conjugate gradient did not converge", residual, iterations)

    logger.debug(f"PCG converged in {iterations} iterations, residual {residual:.3e}")
    return x, residual, iterations


def solve_dense(system: SparseSystem) -> np.ndarray:
    """Direct solve on the expanded dense matrix; intended for small systems."""
    if system.n > settings.dense_max_unknowns:
        raise ConfigurationError(
            f"dense solve refused for {system.n} unknowns "
            f"(limit {settings.dense_max_unknowns})"
        )
    try:
        return np.linalg.solve(system.matrix.toarray(), system.rhs)
    except np.linalg.LinAlgError as e:
        raise SolverError(f"dense factorization failed: {e}", float("nan"), 0) from e

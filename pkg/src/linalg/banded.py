"""
Banded symmetric positive-definite precisions.

Storage is SciPy's lower form: ``bands[d, j] = Q[j + d, j]`` for ``d = 0..k``, so row 0 is the
diagonal and row ``d`` the ``d``-th sub-diagonal, left aligned and zero padded at the end.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np
from numpy.linalg import LinAlgError
from scipy import sparse
from scipy.linalg import cho_solve_banded, cholesky_banded, solve_banded

from src.volatility.difference import diff_matrix

_MINOR_RE = re.compile(r"(\d+)-th leading minor")


class IndefiniteMatrixError(LinAlgError):
    """
    Raised when a banded Cholesky factorization breaks down.
    """
    def __init__(self, leading_minor: int, message: str = ""):
        super().__init__(message or f"Precision is not positive definite (leading minor {leading_minor})")
        self.leading_minor = leading_minor


@dataclass(frozen=True)
class BandedSPD:
    bands: np.ndarray

    def __post_init__(self):
        if self.bands.ndim != 2:
            raise ValueError("bands must be a 2-d array of shape (k + 1, T)")

    @property
    def dim(self) -> int:
        return int(self.bands.shape[1])

    @property
    def bandwidth(self) -> int:
        return int(self.bands.shape[0] - 1)

    # ---------------------
    # Construction
    # ---------------------
    @classmethod
    def from_dense(cls, matrix: np.ndarray, bandwidth: int) -> "BandedSPD":
        n = matrix.shape[0]
        bands = np.zeros((bandwidth + 1, n))
        for d in range(bandwidth + 1):
            bands[d, : n - d] = np.diagonal(matrix, -d)
        return cls(bands)

    @classmethod
    def from_sparse(cls, matrix: sparse.spmatrix, bandwidth: int) -> "BandedSPD":
        n = matrix.shape[0]
        bands = np.zeros((bandwidth + 1, n))
        for d in range(bandwidth + 1):
            bands[d, : n - d] = matrix.diagonal(-d)
        return cls(bands)

    def to_dense(self) -> np.ndarray:
        n, k = self.dim, self.bandwidth
        out = np.diag(self.bands[0].copy())
        for d in range(1, k + 1):
            off = self.bands[d, : n - d]
            out += np.diag(off, -d) + np.diag(off, d)
        return out

    def add_diagonal(self, values) -> "BandedSPD":
        bands = self.bands.copy()
        bands[0] += values
        return BandedSPD(bands)

    def matvec(self, x: np.ndarray) -> np.ndarray:
        n = self.dim
        out = self.bands[0] * x
        for d in range(1, self.bandwidth + 1):
            off = self.bands[d, : n - d]
            out[d:] += off * x[: n - d]
            out[: n - d] += off * x[d:]
        return out

    # ---------------------
    # Factorization
    # ---------------------
    def cholesky(self) -> np.ndarray:
        """Lower banded Cholesky factor L (Q = L L'), same storage layout."""
        try:
            return cholesky_banded(self.bands, lower=True)
        except LinAlgError as e:
            match = _MINOR_RE.search(str(e))
            raise IndefiniteMatrixError(int(match.group(1)) if match else -1) from e


def _lower_factor_to_upper_transpose(factor: np.ndarray) -> np.ndarray:
    """Upper banded storage of L' for scipy.linalg.solve_banded((0, k), ...)."""
    k, n = factor.shape[0] - 1, factor.shape[1]
    upper = np.zeros_like(factor)
    for d in range(k + 1):
        upper[k - d, d:] = factor[d, : n - d]
    return upper


# ---------------------
# Precision builders
# ---------------------
def precision_from_operator(operator: sparse.spmatrix, weights: np.ndarray, bandwidth: int) -> BandedSPD:
    """Band of A' diag(weights) A for a banded lower-triangular operator A."""
    op = sparse.csr_matrix(operator)
    product = op.T @ sparse.diags(weights) @ op
    return BandedSPD.from_sparse(product, bandwidth)


def build_Qv(v: np.ndarray, k: int) -> BandedSPD:
    """
    Prior precision of the level path given log evolution variances v.

    D_full' diag(exp(-v)) D_full, where D_full stacks k identity rows over the k-th difference
    rows. For k = 1 this is the familiar tridiagonal with diagonal exp(-v_t) + exp(-v_{t+1})
    (last entry exp(-v_T)) and off-diagonal -exp(-v_{t+1}).
    """
    v = np.asarray(v, dtype=float)
    ops = diff_matrix(v.size, k)
    return precision_from_operator(ops.D_full, np.exp(-v), k)


def ar_operator(n: int, phi: float) -> sparse.csr_matrix:
    """A with ones on the diagonal and -phi below it: (A x)_t = x_t - phi x_{t-1}."""
    return sparse.diags([np.ones(n), -phi * np.ones(n - 1)], [0, -1], format="csr")


def build_Qxi(xi: np.ndarray, phi: float) -> BandedSPD:
    """A' diag(xi) A: diagonal xi_t + phi^2 xi_{t+1} (last xi_T), off-diagonal -phi xi_{t+1}."""
    xi = np.asarray(xi, dtype=float)
    n = xi.size
    bands = np.zeros((2, n))
    bands[0] = xi
    bands[0, :-1] += phi ** 2 * xi[1:]
    bands[1, :-1] = -phi * xi[1:]
    return BandedSPD(bands)


# ---------------------
# Solves and draws
# ---------------------
def solve(Q: BandedSPD, rhs: np.ndarray) -> np.ndarray:
    return cho_solve_banded((Q.cholesky(), True), np.asarray(rhs, dtype=float))


def sample_gaussian_canonical(Q: BandedSPD, linear: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """
    One draw from N(Q^-1 linear, Q^-1).

    Banded Cholesky Q = L L', mean by two triangular solves, noise from L' x = z with z standard
    normal, O(T k^2) overall.
    """
    factor = Q.cholesky()
    mean = cho_solve_banded((factor, True), np.asarray(linear, dtype=float))
    z = rng.standard_normal(Q.dim)
    noise = solve_banded((0, Q.bandwidth), _lower_factor_to_upper_transpose(factor), z)
    return mean + noise

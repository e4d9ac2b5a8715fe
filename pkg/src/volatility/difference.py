from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import sparse
from scipy.linalg import solve_triangular
from scipy.sparse.linalg import spsolve_triangular
from scipy.special import comb


@dataclass(frozen=True)
class DifferenceOperators:
    """
    k-th difference operator and its "un-differencing" inverse.

    D maps a length-T path to its T - k k-th differences. D_full stacks the k initial-condition
    rows (the levels x_1..x_k) on top of D, giving a unit lower-triangular T x T matrix; S is its
    inverse, so S @ (D_full @ x) == x.
    """
    T: int
    k: int
    D: sparse.csr_matrix
    D_full: sparse.csr_matrix

    @property
    def S(self) -> np.ndarray:
        return solve_triangular(self.D_full.toarray(), np.eye(self.T), lower=True, unit_diagonal=True)

    def apply(self, x: np.ndarray) -> np.ndarray:
        """Initial levels followed by k-th differences (length T)."""
        return self.D_full @ np.asarray(x, dtype=float)

    def reconstruct(self, initial_and_diffs: np.ndarray) -> np.ndarray:
        """Invert `apply` by forward substitution on the banded triangular system."""
        return spsolve_triangular(self.D_full, np.asarray(initial_and_diffs, dtype=float), lower=True, unit_diagonal=True)


def _stencil(k: int) -> np.ndarray:
    """Coefficients of the k-th forward difference, oldest first: (-1)^(k-i) C(k, i)."""
    return np.array([(-1) ** (k - i) * comb(k, i, exact=True) for i in range(k + 1)], dtype=float)


@lru_cache(maxsize=64)
def diff_matrix(T: int, k: int) -> DifferenceOperators:
    if k not in (1, 2, 3):
        raise ValueError(f"differencing order k must be 1, 2 or 3, got {k}")
    if T <= k:
        raise ValueError(f"series length T={T} must exceed differencing order k={k}")

    coefs = _stencil(k)
    D = sparse.diags(
        [np.full(T - k, c) for c in coefs],
        offsets=list(range(k + 1)),
        shape=(T - k, T),
        format="csr",
    )
    initial = sparse.eye(k, T, format="csr")
    D_full = sparse.vstack([initial, D], format="csr")
    return DifferenceOperators(T=T, k=k, D=D, D_full=D_full)

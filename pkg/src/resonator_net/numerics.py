"""Dense complex linear-algebra kernels.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. The routines
here are thin, checked wrappers around LAPACK-backed numpy calls; problem
sizes in this package never exceed a few thousand rows.
"""

from __future__ import annotations

import numpy as np

from .config import DEFAULT_TOLERANCES, Tolerances


class DimensionError(ValueError):
    """Raised when a product would exceed the configured maximum dimension."""


class RankDeficientError(np.linalg.LinAlgError):
    def __init__(self, rank: int, cols: int):
        super().__init__(f"matrix is rank deficient: estimated rank {rank} < {cols}")
        self.rank = rank
        self.cols = cols


def as_matrix(a) -> np.ndarray:
    """Coerce to a finite 2-D complex array."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim == 1:
        m = m.reshape(-1, 1)
    if m.ndim != 2:
        raise ValueError(f"expected a matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix contains NaN or Inf entries")
    return m


def kron(a, b, max_dim: int | None = None) -> np.ndarray:
    a = as_matrix(a)
    b = as_matrix(b)
    limit = DEFAULT_TOLERANCES.max_dim if max_dim is None else max_dim
    rows = a.shape[0] * b.shape[0]
    cols = a.shape[1] * b.shape[1]
    if max(rows, cols) > limit:
        raise DimensionError(f"kron result {rows}x{cols} exceeds max dimension {limit}")
    return np.kron(a, b)


def solve_linear_least_squares(a, b, tol: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    """Minimise ``||a x - b||_2`` for a tall matrix ``a``.

    Raises :class:`RankDeficientError` if the numerical rank (relative to
    the largest singular value) is below the column count.
    """
    a = as_matrix(a)
    b = np.asarray(b, dtype=np.complex128)
    if a.shape[0] < a.shape[1]:
        raise ValueError("least squares needs rows >= cols")
    x, _, rank, sv = np.linalg.lstsq(a, b, rcond=tol.rank_tol)
    if rank < a.shape[1]:
        raise RankDeficientError(int(rank), a.shape[1])
    return x


def eigenvalues_general(a) -> np.ndarray:
    """All eigenvalues (with multiplicity) of a general square matrix."""
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise ValueError("eigenvalues need a square matrix")
    return np.linalg.eigvals(a)


def smallest_singular_pair(a) -> tuple[float, float]:
    """The two smallest singular values ``(s_min, s_second)``."""
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise ValueError("expected a square matrix")
    s = np.linalg.svd(a, compute_uv=False)
    if s.size == 1:
        return float(s[0]), float(s[0])
    return float(s[-1]), float(s[-2])

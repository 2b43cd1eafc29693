"""Reduced states, two-qubit concurrence and population correlations."""

from __future__ import annotations

import numpy as np

from .config import DEFAULT_TOLERANCES
from .numerics import eigenvalues_general

SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
YY = np.kron(SIGMA_Y, SIGMA_Y)


class DegenerateDenominator(ZeroDivisionError):
    pass


def n_sites(rho: np.ndarray) -> int:
    d = rho.shape[0]
    n = d.bit_length() - 1
    if rho.shape != (d, d) or 2 ** n != d:
        raise ValueError(f"expected a 2^n x 2^n density matrix, got {rho.shape}")
    return n


def partial_trace(rho: np.ndarray, keep) -> np.ndarray:
    """Reduced state on the sites in ``keep``, in the order given.

    Site 0 is the leftmost tensor factor.
    """
    rho = np.asarray(rho, dtype=np.complex128)
    n = n_sites(rho)
    keep = [int(k) for k in keep]
    if len(set(keep)) != len(keep):
        raise ValueError(f"keep indices must be distinct, got {keep}")
    for k in keep:
        if not 0 <= k < n:
            raise IndexError(f"site {k} out of range for {n} sites")
    t = rho.reshape([2] * (2 * n))
    rows = list(range(n))
    cols = list(range(n, 2 * n))
    for i in range(n):
        if i not in keep:
            cols[i] = rows[i]
    out = [rows[k] for k in keep] + [cols[k] for k in keep]
    red = np.einsum(t, rows + cols, out)
    m = 2 ** len(keep)
    return red.reshape(m, m)


def wootters_margin(rho: np.ndarray, clamp: float = DEFAULT_TOLERANCES.concurrence_clamp) -> float:
    """``lambda_1 - lambda_2 - lambda_3 - lambda_4`` before clipping at zero.

    ``rho_tilde = (sy x sy) conj(rho) (sy x sy)`` uses the entrywise
    conjugate, not the adjoint.
    """
    rho = np.asarray(rho, dtype=np.complex128)
    if rho.shape != (4, 4):
        raise ValueError(f"concurrence needs a 4x4 state, got {rho.shape}")
    rho_tilde = YY @ rho.conj() @ YY
    moduli = np.abs(eigenvalues_general(rho @ rho_tilde))
    moduli[moduli < clamp] = 0.0
    lam = np.sort(np.sqrt(moduli))[::-1]
    return float(lam[0] - lam[1] - lam[2] - lam[3])


def concurrence(rho: np.ndarray, clamp: float = DEFAULT_TOLERANCES.concurrence_clamp) -> float:
    """Wootters concurrence of a two-qubit density matrix."""
    return max(0.0, wootters_margin(rho, clamp))


def _number(n: int, i: int) -> np.ndarray:
    diag = ((np.arange(2 ** n) >> (n - 1 - i)) & 1).astype(float)
    return diag


def populations(rho: np.ndarray) -> np.ndarray:
    """Mean excitation <P_i^dag P_i> of every site."""
    n = n_sites(rho)
    p = np.real(np.diag(rho))
    return np.array([p @ _number(n, i) for i in range(n)])


def cross_correlation(rho: np.ndarray, i: int, j: int, floor: float = 1e-12) -> float:
    """``<n_i n_j> / (<n_i><n_j>)`` for site populations ``n = P^dag P``."""
    n = n_sites(rho)
    p = np.real(np.diag(rho))
    ni, nj = _number(n, i), _number(n, j)
    mi, mj = p @ ni, p @ nj
    if mi < floor or mj < floor:
        raise DegenerateDenominator(f"population underflow: <n_{i}>={mi:.3e}, <n_{j}>={mj:.3e}")
    return float((p @ (ni * nj)) / (mi * mj))


def factorization_diagnostic(rho: np.ndarray, third: int) -> tuple[float, float]:
    """Purity and ground-state weight of one site's reduced state."""
    r1 = partial_trace(rho, [third])
    purity = float(np.real(np.trace(r1 @ r1)))
    return purity, float(np.real(r1[0, 0]))

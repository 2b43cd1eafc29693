"""Site operators, effective Hamiltonian and the Liouvillian superoperator.

Basis convention: node 0 is the leftmost tensor factor and each site uses
the ordering ``|0>, |1>`` (ground, one polariton). The lowering operator
maps ``|1> -> |0>``, so on one site ``P = [[0, 1], [0, 0]]``.

Vectorisation is column stacking, ``vec(rho) = rho.reshape(-1, order="F")``,
with ``vec(A X B) = (B^T kron A) vec(X)``.

The dissipator uses ``F_ij(rho) = 2 P_i rho P_j^dag - P_i^dag P_j rho -
rho P_i^dag P_j``. Node ``i`` decays with ``D_i = sum_{l touching i}
Gamma_l + gamma_i`` and every two-endpoint link ``(j, k)`` adds the cross
terms ``Gamma_l (F_jk + F_kj)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .network import MAX_NODES, Network

SIGMA_MINUS = np.array([[0, 1], [0, 0]], dtype=np.complex128)


def vec(rho: np.ndarray) -> np.ndarray:
    return np.asarray(rho).reshape(-1, order="F")


def unvec(v: np.ndarray, dim: int) -> np.ndarray:
    return np.asarray(v).reshape(dim, dim, order="F")


@dataclass(frozen=True)
class SiteOperators:
    n: int
    P: tuple[np.ndarray, ...]
    N: tuple[np.ndarray, ...]

    @property
    def dim(self) -> int:
        return 2 ** self.n


@lru_cache(maxsize=None)
def build_site_operators(n: int) -> SiteOperators:
    if not 1 <= n <= MAX_NODES:
        raise ValueError(f"node count must be in [1, {MAX_NODES}], got {n}")
    P = []
    for i in range(n):
        op = np.array([[1.0 + 0j]])
        for k in range(n):
            op = np.kron(op, SIGMA_MINUS if k == i else np.eye(2))
        op.setflags(write=False)
        P.append(op)
    N = []
    for p in P:
        num = p.conj().T @ p
        num.setflags(write=False)
        N.append(num)
    return SiteOperators(n, tuple(P), tuple(N))


def _ops_for(net: Network, ops: SiteOperators | None) -> SiteOperators:
    ops = build_site_operators(net.n) if ops is None else ops
    if ops.n != net.n:
        raise ValueError(f"site operators for {ops.n} nodes, network has {net.n}")
    return ops


def build_h_eff(net: Network, ops: SiteOperators | None = None) -> np.ndarray:
    net.require_effective()
    ops = _ops_for(net, ops)
    half = np.zeros((ops.dim, ops.dim), dtype=np.complex128)
    for link in net.links:
        if len(link.endpoints) == 2:
            j, k = link.endpoints
            half += link.Gamma * link.y * (ops.P[j].conj().T @ ops.P[k])
        for j in link.endpoints:
            half += link.Gamma * link.x * ops.P[j].conj().T
    H = half + half.conj().T
    for i, node in enumerate(net.nodes):
        if node.detuning:
            H += node.detuning * ops.N[i]
    return H


def decay_coefficients(net: Network) -> list[float]:
    """Diagonal dissipator weight D_i = sum of incident Gamma_l plus gamma_i."""
    D = [node.gamma for node in net.nodes]
    for link in net.links:
        for j in link.endpoints:
            D[j] += link.Gamma
    return D


def dissipator_terms(net: Network) -> list[tuple[float, int, int]]:
    """(coefficient, i, j) triples for every F_ij term of the master equation."""
    terms = [(d, i, i) for i, d in enumerate(decay_coefficients(net)) if d != 0]
    for link in net.links:
        if len(link.endpoints) == 2 and link.Gamma != 0:
            j, k = link.endpoints
            terms.append((link.Gamma, j, k))
            terms.append((link.Gamma, k, j))
    return terms


def apply_F(Pi: np.ndarray, Pj: np.ndarray, rho: np.ndarray) -> np.ndarray:
    M = Pi.conj().T @ Pj
    return 2.0 * Pi @ rho @ Pj.conj().T - M @ rho - rho @ M


def apply_master_rhs(net: Network, ops: SiteOperators | None, rho: np.ndarray) -> np.ndarray:
    """Time derivative of ``rho`` by direct matrix products (no superoperator)."""
    ops = _ops_for(net, ops)
    rho = np.asarray(rho, dtype=np.complex128)
    if rho.shape != (ops.dim, ops.dim):
        raise ValueError(f"rho has shape {rho.shape}, expected {(ops.dim, ops.dim)}")
    H = build_h_eff(net, ops)
    out = -1j * (H @ rho - rho @ H)
    for c, i, j in dissipator_terms(net):
        out += c * apply_F(ops.P[i], ops.P[j], rho)
    return out


@dataclass(frozen=True)
class LiouvillianMatrix:
    matrix: np.ndarray
    n: int
    vectorization: str = "column-stacking"

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def hilbert_dim(self) -> int:
        return 2 ** self.n


def superop_F(Pi: np.ndarray, Pj: np.ndarray) -> np.ndarray:
    I = np.eye(Pi.shape[0])
    M = Pi.conj().T @ Pj
    return 2.0 * np.kron(Pj.conj(), Pi) - np.kron(I, M) - np.kron(M.T, I)


def hamiltonian_superop(H: np.ndarray) -> np.ndarray:
    I = np.eye(H.shape[0])
    return -1j * (np.kron(I, H) - np.kron(H.T, I))


def build_liouvillian(net: Network, ops: SiteOperators | None = None) -> LiouvillianMatrix:
    ops = _ops_for(net, ops)
    L = hamiltonian_superop(build_h_eff(net, ops))
    for c, i, j in dissipator_terms(net):
        L += c * superop_F(ops.P[i], ops.P[j])
    return LiouvillianMatrix(L, net.n)


def trace_row(dim: int) -> np.ndarray:
    """Row vector t with t . vec(rho) = trace(rho)."""
    return vec(np.eye(dim, dtype=np.complex128))

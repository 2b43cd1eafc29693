"""Steady states of the effective master equation.

:func:`solve_steady` solves ``L vec(rho) = 0`` together with the trace
condition as one least-squares problem and certifies uniqueness through
the second-smallest singular value of ``L``. :func:`evolve_to_steady`
reaches the same state by fixed-step RK4 integration of the direct
right-hand side and never touches the superoperator, so the two can be
checked against each other.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_TOLERANCES, Tolerances
from .liouvillian import (
    LiouvillianMatrix,
    SiteOperators,
    apply_master_rhs,
    build_h_eff,
    build_liouvillian,
    build_site_operators,
    decay_coefficients,
    trace_row,
    unvec,
    vec,
)
from .network import Network
from .numerics import RankDeficientError, smallest_singular_pair, solve_linear_least_squares


class SteadyStateError(RuntimeError):
    pass


class NonUniqueSteadyState(SteadyStateError):
    pass


class UnphysicalState(SteadyStateError):
    pass


class NoConvergence(SteadyStateError):
    pass


@dataclass(frozen=True)
class SteadyStateResult:
    rho: np.ndarray
    # ||L vec(rho)||_2 with L scaled to unit max-abs entry
    residual: float
    # second-smallest singular value of the same scaled L
    uniqueness_gap: float
    min_eigenvalue: float


def solve_steady(L: LiouvillianMatrix | np.ndarray, tol: Tolerances = DEFAULT_TOLERANCES) -> SteadyStateResult:
    M = L.matrix if isinstance(L, LiouvillianMatrix) else np.asarray(L, dtype=np.complex128)
    dim2 = M.shape[0]
    d = int(round(np.sqrt(dim2)))
    if M.shape != (dim2, dim2) or d * d != dim2:
        raise ValueError(f"Liouvillian must be square with size dim^2, got {M.shape}")
    scale = np.abs(M).max()
    if scale == 0:
        raise NonUniqueSteadyState("zero Liouvillian: every state is stationary")
    A = M / scale
    _, gap = smallest_singular_pair(A)
    if gap < tol.gap_factor * tol.residual_tol:
        raise NonUniqueSteadyState(f"degenerate steady manifold (uniqueness gap {gap:.3e})")
    aug = np.vstack([A, trace_row(d)[None, :]])
    rhs = np.zeros(dim2 + 1, dtype=np.complex128)
    rhs[-1] = 1.0
    try:
        v = solve_linear_least_squares(aug, rhs, tol)
    except RankDeficientError as exc:
        raise NonUniqueSteadyState(str(exc)) from exc
    rho = unvec(v, d)
    rho = 0.5 * (rho + rho.conj().T)
    rho /= np.trace(rho).real
    residual = float(np.linalg.norm(A @ vec(rho)))
    min_eig = float(np.linalg.eigvalsh(rho).min())
    if min_eig < -tol.positivity_tol:
        raise UnphysicalState(f"steady state has eigenvalue {min_eig:.3e}")
    return SteadyStateResult(rho, residual, gap, min_eig)


def steady_state(net: Network, ops: SiteOperators | None = None,
                 tol: Tolerances = DEFAULT_TOLERANCES) -> SteadyStateResult:
    """Build the Liouvillian of an effective network and solve it."""
    return solve_steady(build_liouvillian(net, ops), tol)


def rate_scale(net: Network, ops: SiteOperators | None = None) -> float:
    ops = build_site_operators(net.n) if ops is None else ops
    H = build_h_eff(net, ops)
    D = decay_coefficients(net)
    return float(max(np.abs(H).max(initial=0.0), max(D, default=0.0)))


def _rk4_step(f, rho, dt):
    k1 = f(rho)
    k2 = f(rho + 0.5 * dt * k1)
    k3 = f(rho + 0.5 * dt * k2)
    k4 = f(rho + dt * k3)
    return rho + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)


def evolve_to_steady(net: Network, rho0: np.ndarray, dt: float, t_max: float, tol: float = 1e-10,
                     method: str = "squaring", ops: SiteOperators | None = None) -> np.ndarray:
    """Integrate the master equation with fixed-step RK4 until stationary.

    Stops when ``||d rho/dt||_F < tol * s`` with ``s`` the largest rate in
    the problem, or raises :class:`NoConvergence` at ``t_max``.

    ``method="stepping"`` takes one step at a time. ``method="squaring"``
    tabulates the one-step RK4 map from the direct right-hand side and
    advances by repeated squaring, which visits the same discrete
    trajectory at times ``dt * 2^k``.
    """
    ops = build_site_operators(net.n) if ops is None else ops
    rho = np.array(rho0, dtype=np.complex128)
    s = rate_scale(net, ops)
    if s == 0:
        return rho
    if dt * s >= 0.05:
        raise ValueError(f"dt={dt:.3e} too coarse for rate scale {s:.3e} (need dt*s < 0.05)")

    def f(r):
        return apply_master_rhs(net, ops, r)

    def converged(r):
        return np.linalg.norm(f(r)) < tol * s

    if method == "stepping":
        t = 0.0
        while t < t_max:
            new = _rk4_step(f, rho, dt)
            tr = np.trace(new).real
            if abs(tr - np.trace(rho).real) > 1e-9:
                raise NoConvergence(f"trace drift {tr - np.trace(rho).real:.3e} in one step")
            rho = new / tr
            t += dt
            if converged(rho):
                return rho
        raise NoConvergence(f"not stationary after t_max={t_max:.3e}")
    if method != "squaring":
        raise ValueError(f"unknown method {method!r}")

    d = ops.dim
    T = np.empty((d * d, d * d), dtype=np.complex128)
    for col in range(d * d):
        e = np.zeros(d * d, dtype=np.complex128)
        e[col] = 1.0
        T[:, col] = vec(_rk4_step(f, unvec(e, d), dt))
    drift = np.abs(trace_row(d) @ T - trace_row(d)).max()
    if drift > 1e-9:
        raise NoConvergence(f"RK4 step does not preserve trace (drift {drift:.3e})")
    v = vec(rho)
    t = dt
    while True:
        v = T @ v
        r = unvec(v, d)
        r = r / np.trace(r).real
        v = vec(r)
        if converged(r):
            return r
        if t >= t_max:
            raise NoConvergence(f"not stationary after t_max={t_max:.3e}")
        T = T @ T
        t *= 2

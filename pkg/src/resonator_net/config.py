"""Numerical tolerance constants shared across modules."""

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    # singular values below rank_tol * s_max count as zero
    rank_tol: float = 1e-10
    # relative residual ||L vec(rho)|| / ||L|| accepted for a steady state
    residual_tol: float = 1e-10
    # uniqueness gap must exceed gap_factor * residual_tol
    gap_factor: float = 1e3
    hermiticity_tol: float = 1e-10
    trace_tol: float = 1e-10
    positivity_tol: float = 1e-8
    # eigenvalue moduli of rho*rho_tilde below this are treated as zero
    concurrence_clamp: float = 1e-14
    max_dim: int = 4096


DEFAULT_TOLERANCES = Tolerances()

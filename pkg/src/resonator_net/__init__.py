"""Steady-state entanglement in driven, lossy polariton networks."""

from .config import Tolerances, DEFAULT_TOLERANCES
from .network import (
    EffectiveLink,
    Network,
    Node,
    PhysicalLink,
    derive_effective,
    scenario_catalog,
    set_z,
    z_values,
)
from .liouvillian import (
    SiteOperators,
    apply_master_rhs,
    build_h_eff,
    build_liouvillian,
    build_site_operators,
)
from .steadystate import SteadyStateResult, evolve_to_steady, solve_steady
from .entanglement import (
    concurrence,
    cross_correlation,
    factorization_diagnostic,
    partial_trace,
)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_TOLERANCES",
    "EffectiveLink",
    "Network",
    "Node",
    "PhysicalLink",
    "SiteOperators",
    "SteadyStateResult",
    "Tolerances",
    "apply_master_rhs",
    "build_h_eff",
    "build_liouvillian",
    "build_site_operators",
    "concurrence",
    "cross_correlation",
    "derive_effective",
    "evolve_to_steady",
    "factorization_diagnostic",
    "partial_trace",
    "scenario_catalog",
    "set_z",
    "solve_steady",
    "z_values",
]

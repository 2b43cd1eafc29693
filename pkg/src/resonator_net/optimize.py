"""Derivative-free maximisation of steady-state concurrence.

Free parameters are described by :class:`FreeParam`. Box-bounded scalars
are optimised in coordinates normalised to ``[0, 1]`` so that the simplex
diameter tolerance is relative to each bound width. A phase whose bounds
cover the full circle is carried by two coordinates ``(c, s)`` and read
back as ``atan2(s, c)``, which removes the artificial wrap-around edge.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np
from scipy.optimize import minimize

from .entanglement import concurrence, partial_trace, wootters_margin
from .network import Network, set_z
from .steadystate import SteadyStateError, steady_state

log = logging.getLogger(__name__)

KINDS = ("abs_x", "arg_x", "y", "z", "Gamma")
TWO_PI = 2 * math.pi


@dataclass(frozen=True)
class FreeParam:
    """One optimisation coordinate applied to one or more links.

    ``abs_x`` sets ``|x_l|`` keeping the phase, ``arg_x`` sets the phase
    keeping ``|x_l|``, ``y`` and ``Gamma`` set the value, and ``z`` sets the
    node loss so the listed links share that z.
    """

    kind: str
    links: tuple[int, ...]
    lower: float
    upper: float

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown parameter kind {self.kind!r}")
        object.__setattr__(self, "links", tuple(int(l) for l in self.links))
        if not (math.isfinite(self.lower) and math.isfinite(self.upper)) or self.upper < self.lower:
            raise ValueError(f"bad bounds [{self.lower}, {self.upper}] for {self.kind}")

    @property
    def name(self) -> str:
        return f"{self.kind}[{','.join(str(l + 1) for l in self.links)}]"

    @property
    def circular(self) -> bool:
        return self.kind == "arg_x" and self.upper - self.lower >= TWO_PI - 1e-12

    @property
    def width(self) -> int:
        return 2 if self.circular else 1


@dataclass(frozen=True)
class OptimizeSpec:
    scenario: Network
    free: tuple[FreeParam, ...]
    pair: tuple[int, int] = (0, 1)
    restarts: int = 16
    seed: int = 0
    max_evals: int = 2000
    xtol: float = 1e-6

    def __post_init__(self):
        object.__setattr__(self, "free", tuple(self.free))
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        self.scenario.require_effective()


@dataclass
class OptimizeResult:
    best_params: dict[str, float]
    best_C: float
    evaluations: int
    per_restart: list[dict]
    failures: int = 0
    history: list[float] = field(default_factory=list, repr=False)

    def to_dict(self) -> dict:
        return {
            "best_params": self.best_params,
            "best_C": self.best_C,
            "evaluations": self.evaluations,
            "failures": self.failures,
            "per_restart": self.per_restart,
        }


def apply_params(net: Network, free: Sequence[FreeParam], values: Sequence[float]) -> Network:
    """Return ``net`` with every free parameter set to its physical value."""
    z_assign = {}
    for p, v in zip(free, values):
        for l in p.links:
            link = net.links[l]
            if p.kind == "abs_x":
                ph = np.angle(link.x) if link.x != 0 else 0.0
                net = net.with_link(l, x=complex(v * math.cos(ph), v * math.sin(ph)))
            elif p.kind == "arg_x":
                net = net.with_link(l, x=complex(abs(link.x) * math.cos(v), abs(link.x) * math.sin(v)))
            elif p.kind == "y":
                net = net.with_link(l, y=v)
            elif p.kind == "Gamma":
                net = net.with_link(l, Gamma=v)
            elif p.kind == "z":
                z_assign[l] = v
    if z_assign:
        net = set_z(net, z_assign)
    return net


def _decode(free: Sequence[FreeParam], u: np.ndarray) -> list[float]:
    vals = []
    k = 0
    for p in free:
        if p.circular:
            vals.append(math.atan2(u[k + 1], u[k]) % TWO_PI)
        else:
            vals.append(p.lower + float(np.clip(u[k], 0.0, 1.0)) * (p.upper - p.lower))
        k += p.width
    return vals


def _bounds(free: Sequence[FreeParam]) -> list[tuple[float, float]]:
    out = []
    for p in free:
        out += [(-1.0, 1.0)] * 2 if p.circular else [(0.0, 1.0)]
    return out


def _random_start(free: Sequence[FreeParam], rng: np.random.Generator) -> np.ndarray:
    u = []
    for p in free:
        if p.circular:
            a = rng.uniform(0, TWO_PI)
            u += [math.cos(a), math.sin(a)]
        else:
            u.append(rng.uniform(0.0, 1.0))
    return np.array(u)


def pair_concurrence(net: Network, pair: tuple[int, int]) -> float:
    rho = steady_state(net).rho
    return concurrence(partial_trace(rho, pair))


def pair_margin(net: Network, pair: tuple[int, int]) -> float:
    """Unclipped Wootters margin; equals the concurrence where that is positive.

    Used as the objective so the simplex still sees a slope across regions
    where the concurrence is identically zero.
    """
    return wootters_margin(partial_trace(steady_state(net).rho, pair))


def _initial_simplex(u0: np.ndarray, bounds, step: float = 0.1) -> np.ndarray:
    k = u0.size
    sim = np.tile(u0, (k + 1, 1))
    for i in range(k):
        lo, hi = bounds[i]
        sim[i + 1, i] = u0[i] + step if u0[i] + step <= hi else u0[i] - step
        sim[i + 1, i] = min(max(sim[i + 1, i], lo), hi)
    return sim


def _run_restart(spec: OptimizeSpec, index: int, u0: np.ndarray) -> dict:
    free = spec.free
    state = {"failures": 0, "history": [], "best": (-math.inf, None)}

    def objective(u):
        vals = _decode(free, u)
        try:
            m = pair_margin(apply_params(spec.scenario, free, vals), spec.pair)
        except (SteadyStateError, ValueError, np.linalg.LinAlgError) as exc:
            state["failures"] += 1
            log.debug("restart %d: point %s scored 0 (%s)", index, vals, exc)
            m = 0.0
        state["history"].append(max(m, 0.0))
        if m > state["best"][0]:
            state["best"] = (m, vals)
        return -m

    bounds = _bounds(free)
    if u0.size:
        minimize(objective, u0, method="Nelder-Mead", bounds=bounds,
                 options={"initial_simplex": _initial_simplex(u0, bounds), "xatol": spec.xtol,
                          "fatol": math.inf, "maxfev": spec.max_evals})
    else:
        objective(u0)
    best_m, best_vals = state["best"]
    return {
        "restart": index,
        "best_C": max(best_m, 0.0),
        "params": {p.name: v for p, v in zip(free, best_vals)},
        "evaluations": len(state["history"]),
        "failures": state["failures"],
        "history": state["history"],
    }


def _run_restart_args(args):
    return _run_restart(*args)


def maximize_concurrence(spec: OptimizeSpec, threads: int = 1) -> OptimizeResult:
    """Best-of-restarts Nelder-Mead maximisation of the pair concurrence.

    Start points are drawn up front from ``numpy.random.default_rng(seed)``
    so results do not depend on execution order. Ties go to the lowest
    restart index.
    """
    rng = np.random.default_rng(spec.seed)
    starts = [_random_start(spec.free, rng) for _ in range(spec.restarts)]
    jobs = [(spec, i, u0) for i, u0 in enumerate(starts)]
    runs = parallel_map(_run_restart_args, jobs, threads)
    best = max(runs, key=lambda r: (r["best_C"], -r["restart"]))
    history = [c for r in runs for c in r["history"]]
    return OptimizeResult(
        best_params=dict(best["params"]),
        best_C=best["best_C"],
        evaluations=sum(r["evaluations"] for r in runs),
        per_restart=[{k: v for k, v in r.items() if k != "history"} for r in runs],
        failures=sum(r["failures"] for r in runs),
        history=history,
    )


def parallel_map(fn, items, threads: int = 1) -> list:
    """Ordered map, optionally over a process pool (``threads`` 0 = all CPUs)."""
    import os

    items = list(items)
    workers = (os.cpu_count() or 1) if threads == 0 else threads
    if workers <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    from concurrent.futures import ProcessPoolExecutor

    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def spec_from_dict(scenario: Network, doc: dict) -> OptimizeSpec:
    """Build a spec from JSON; link indices in ``links`` are 1-based."""
    allowed = {"free", "pair", "restarts", "seed", "max_evals", "xtol"}
    extra = set(doc) - allowed
    if extra:
        raise ValueError(f"optimize spec: unknown keys {sorted(extra)}")
    free = []
    for i, p in enumerate(doc.get("free", [])):
        unknown = set(p) - {"kind", "links", "lower", "upper"}
        if unknown:
            raise ValueError(f"free[{i}]: unknown keys {sorted(unknown)}")
        free.append(FreeParam(p["kind"], tuple(int(l) - 1 for l in p["links"]), float(p["lower"]),
                              float(p["upper"])))
    pair = tuple(int(v) - 1 for v in doc.get("pair", (1, 2)))
    return OptimizeSpec(scenario, tuple(free), pair=pair, restarts=int(doc.get("restarts", 16)),
                        seed=int(doc.get("seed", 0)), max_evals=int(doc.get("max_evals", 2000)),
                        xtol=float(doc.get("xtol", 1e-6)))


def with_overrides(spec: OptimizeSpec, **kw) -> OptimizeSpec:
    return replace(spec, **{k: v for k, v in kw.items() if v is not None})

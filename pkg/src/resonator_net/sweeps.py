"""Parameter sweeps: phase maps, drive-ratio scans, loss scans and ring size.

Every sweep returns a :class:`SweepResult`: named columns of equal length,
one row per grid point, in a fixed axis order regardless of how the points
were scheduled.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from .entanglement import (
    DegenerateDenominator,
    concurrence,
    cross_correlation,
    factorization_diagnostic,
    partial_trace,
    populations,
    wootters_margin,
)
from .network import Network, scenario_catalog, set_z
from .optimize import FreeParam, OptimizeSpec, maximize_concurrence, parallel_map
from .steadystate import SteadyStateError, steady_state

log = logging.getLogger(__name__)

TWO_PI = 2 * math.pi


@dataclass
class SweepResult:
    axes: list[str]
    columns: dict[str, list] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(next(iter(self.columns.values()), []))

    def column(self, name: str) -> np.ndarray:
        return np.asarray(self.columns[name])

    def append(self, row: dict) -> None:
        if not self.columns:
            self.columns = {k: [] for k in row}
        if set(row) != set(self.columns):
            raise ValueError(f"row keys {sorted(row)} do not match columns {sorted(self.columns)}")
        for k, v in row.items():
            self.columns[k].append(v)

    def rows(self) -> Iterable[dict]:
        names = list(self.columns)
        for vals in zip(*(self.columns[k] for k in names)):
            yield dict(zip(names, vals))


def evaluate_point(net: Network, pair: tuple[int, int], third: int | None = None) -> dict:
    """Steady-state observables at one parameter point.

    Failures are reported in ``status`` with concurrence 0 and NaN elsewhere.
    """
    row = {"concurrence": 0.0, "cross_correlation": math.nan}
    row.update({f"n{i + 1}": math.nan for i in range(net.n)})
    if third is not None:
        row.update({"purity": math.nan, "ground_fidelity": math.nan})
    try:
        rho = steady_state(net).rho
    except (SteadyStateError, np.linalg.LinAlgError) as exc:
        log.debug("steady state failed: %s", exc)
        row["status"] = type(exc).__name__
        return row
    row["concurrence"] = concurrence(partial_trace(rho, pair))
    try:
        row["cross_correlation"] = cross_correlation(rho, *pair)
    except DegenerateDenominator:
        pass
    for i, p in enumerate(populations(rho)):
        row[f"n{i + 1}"] = float(p)
    if third is not None:
        row["purity"], row["ground_fidelity"] = factorization_diagnostic(rho, third)
    row["status"] = "ok"
    return row


def _eval_args(args):
    return evaluate_point(*args)


def _third(net: Network, pair) -> int | None:
    rest = [i for i in range(net.n) if i not in pair]
    return rest[0] if len(rest) == 1 else None


def set_drive(net: Network, link: int, magnitude: float, phase: float) -> Network:
    return net.with_link(link, x=complex(magnitude * math.cos(phase), magnitude * math.sin(phase)))


def phase_sweep(net: Network, grid: int, links: tuple[int, int] = (0, 2),
                magnitudes: tuple[float, float] | None = None, pair: tuple[int, int] | None = None,
                threads: int = 1) -> SweepResult:
    """Concurrence and cross-correlation over ``(phi_a, phi_b)`` on ``[0, 2 pi)^2``.

    Rows run over ``phi_a`` (outer) and ``phi_b`` (inner).
    """
    if grid < 1:
        raise ValueError("grid must be >= 1")
    net.require_effective()
    pair = _default_pair(net) if pair is None else pair
    if magnitudes is None:
        magnitudes = tuple(abs(net.links[l].x) for l in links)
    phis = [TWO_PI * k / grid for k in range(grid)]
    points = []
    jobs = []
    third = _third(net, pair)
    for pa in phis:
        for pb in phis:
            point = set_drive(set_drive(net, links[0], magnitudes[0], pa), links[1], magnitudes[1], pb)
            points.append((pa, pb))
            jobs.append((point, pair, third))
    rows = parallel_map(_eval_args, jobs, threads)
    out = SweepResult(axes=["phi_a", "phi_b", "dphi"])
    for (pa, pb), row in zip(points, rows):
        out.append({"phi_a": pa, "phi_b": pb, "dphi": (pa - pb) % TWO_PI, **row})
    return out


def _default_pair(net: Network) -> tuple[int, int]:
    return (1, 2) if net.n >= 3 else (0, 1)


def _max_along(f, lo: float, hi: float, samples: int = 40) -> tuple[float, float]:
    """Maximise a 1-D function: log-spaced scan, then bounded Brent refinement."""
    xs = np.geomspace(lo, hi, samples)
    vals = [f(x) for x in xs]
    i = int(np.argmax(vals))
    a, b = xs[max(i - 1, 0)], xs[min(i + 1, samples - 1)]
    res = minimize_scalar(lambda s: -f(s), bounds=(a, b), method="bounded", options={"xatol": 1e-6 * b})
    if -res.fun >= vals[i]:
        return float(res.x), float(-res.fun)
    return float(xs[i]), float(vals[i])


def _ratio_point(args):
    net, theta, links, pair, lo, hi = args
    c, s = math.cos(theta), math.sin(theta)

    def margin(mag):
        pt = net.with_link(links[0], x=complex(mag * c)).with_link(links[1], x=complex(mag * s))
        try:
            return wootters_margin(partial_trace(steady_state(pt).rho, pair))
        except SteadyStateError as exc:
            log.debug("theta=%.4f |x|=%.4g scored 0 (%s)", theta, mag, exc)
            return 0.0

    mag, m = _max_along(margin, lo, hi)
    return {"theta": theta, "magnitude": mag, "x_a": mag * c, "x_b": mag * s, "concurrence": max(m, 0.0)}


def ratio_scan(net: Network, thetas: Sequence[float], links: tuple[int, int] = (0, 2),
               pair: tuple[int, int] | None = None, magnitude_bounds: tuple[float, float] = (1e-2, 50.0),
               threads: int = 1) -> SweepResult:
    """Best concurrence along each drive direction ``(x_a, x_b) ~ (cos t, sin t)``.

    ``tan t = x_b / x_a`` and ``sign(x_a) = sign(cos t)``; the overall
    magnitude is optimised per direction, so ``t = pi/2`` (``x_a = 0``) is
    an ordinary point.
    """
    net.require_effective()
    pair = _default_pair(net) if pair is None else pair
    jobs = [(net, float(t), links, pair, *magnitude_bounds) for t in thetas]
    out = SweepResult(axes=["theta"])
    for row in parallel_map(_ratio_point, jobs, threads):
        out.append(row)
    return out


# ---------------------------------------------------------------------------
# robustness against intrinsic loss


def normalised(name: str) -> Network:
    """Catalog scenario rescaled to unit strong-link rate (ratios kept)."""
    net = scenario_catalog(name)
    G = max(l.Gamma for l in net.links)
    links = [type(l)(l.endpoints, l.Gamma / G, l.x, l.y) for l in net.links]
    return net.with_links(links).with_gamma(0.0)


@dataclass(frozen=True)
class ZFamily:
    """How one configuration enters the loss sweep.

    ``z_links`` are the links whose z is the sweep variable; the remaining
    links follow from the shared node loss.
    """

    name: str
    base: Network
    z_links: tuple[int, ...]
    free: tuple[FreeParam, ...]
    pair: tuple[int, int]


def z_families(y: float = 15.0, max_drive: float = 20.0) -> dict[str, ZFamily]:
    drive = (0.05, max_drive)
    # the weak side links of config (ii) need much larger |x| for the same drive strength
    wide = (0.05, 200.0)
    ring = normalised("config_iii")
    ring = ring.with_links([type(l)(l.endpoints, l.Gamma, l.x, y) for l in ring.links])
    pair_net = normalised("config_i").with_link(0, y=y)
    return {
        # single waveguide between the two cavities
        "config_i": ZFamily("config_i", pair_net, (0,),
                            (FreeParam("abs_x", (0,), *drive),), (0, 1)),
        # strong shared waveguide, weak side waveguides; z is that of the shared link
        "config_ii": ZFamily("config_ii", normalised("config_ii"), (1,),
                             (FreeParam("abs_x", (0, 2), *wide), FreeParam("arg_x", (2,), 0.0, TWO_PI)),
                             (0, 1)),
        # ring, Gamma_2 = 1e-3 Gamma_1 so z2 = 1e3 (z - 1) + 1 follows automatically
        "config_iii": ZFamily("config_iii", ring, (0, 2),
                              (FreeParam("abs_x", (0, 2), *drive), FreeParam("arg_x", (2,), 0.0, TWO_PI)),
                              (1, 2)),
    }


def _z_point(args):
    fam, z, restarts, seed = args
    net = set_z(fam.base, {l: z for l in fam.z_links})
    spec = OptimizeSpec(net, fam.free, pair=fam.pair, restarts=restarts, seed=seed)
    res = maximize_concurrence(spec)
    return res.best_C, res.best_params


def z_sweep(configs: Sequence[str], z_grid: Sequence[float], restarts: int = 16, seed: int = 0,
            threads: int = 1, families: dict[str, ZFamily] | None = None) -> SweepResult:
    """Optimised concurrence versus z for each configuration.

    Columns ``C_<config>`` hold each configuration's own optimum and
    ``envelope_<config>`` the best over the configuration and the
    single-waveguide pair it contains as a limiting case.
    """
    fams = z_families() if families is None else families
    for z in z_grid:
        if not 1.0 <= z <= 6.0:
            raise ValueError(f"z must lie in [1, 6], got {z}")
    names = list(dict.fromkeys(list(configs) + ["config_i"]))
    jobs = [(fams[c], float(z), restarts, seed) for z in z_grid for c in names]
    results = parallel_map(_z_point, jobs, threads)
    out = SweepResult(axes=["z"])
    k = 0
    for z in z_grid:
        row = {"z": float(z)}
        best = {}
        for c in names:
            best[c], params = results[k]
            k += 1
        for c in configs:
            row[f"C_{c}"] = best[c]
        for c in configs:
            row[f"envelope_{c}"] = max(best[c], best["config_i"])
        out.append(row)
    return out


def crossover(z: Sequence[float], upper: Sequence[float], lower: Sequence[float]) -> float | None:
    """First z where ``upper - lower`` changes from positive to non-positive.

    Linear interpolation between grid points; ``None`` if it never does.
    """
    d = np.asarray(upper) - np.asarray(lower)
    for i in range(1, len(d)):
        if d[i - 1] > 0 >= d[i]:
            return float(z[i - 1] + (z[i] - z[i - 1]) * d[i - 1] / (d[i - 1] - d[i]))
    return None


# ---------------------------------------------------------------------------
# network size


def ring_family(n: int, weak: int = 1, ratio: float = 1e-3, y: float = 15.0, z: float = 1.01) -> Network:
    """Ring of ``n`` sites where link ``weak`` is ``ratio`` times weaker than the rest."""
    from .network import ring

    G = [ratio if i == weak else 1.0 for i in range(n)]
    net = ring(n, G, [1.0 + 0j] * n, y, 0.0, name=f"ring{n}")
    strong = [i for i in range(n) if i != weak]
    return set_z(net, {l: z for l in strong})


def size_check(n: int = 4, restarts: int = 4, seed: int = 0, max_evals: int = 600, threads: int = 1,
               max_drive: float = 10.0) -> dict:
    """Optimised concurrence across the weak link of an ``n``-ring against the 3-ring.

    Every drive magnitude and every drive phase except the first is free.
    """
    report = {"seed": seed, "restarts": restarts, "max_evals": max_evals}
    for m in (3, n):
        net = ring_family(m)
        free = [FreeParam("abs_x", (l,), 0.0, max_drive) for l in range(m)]
        free += [FreeParam("arg_x", (l,), 0.0, TWO_PI) for l in range(1, m)]
        pair = net.links[1].endpoints
        spec = OptimizeSpec(net, tuple(free), pair=pair, restarts=restarts, seed=seed, max_evals=max_evals)
        res = maximize_concurrence(spec, threads)
        from .optimize import apply_params

        best = apply_params(net, spec.free, [res.best_params[p.name] for p in spec.free])
        rho = steady_state(best).rho
        pairwise = {f"{i + 1},{j + 1}": concurrence(partial_trace(rho, [i, j]))
                    for i in range(m) for j in range(i + 1, m)}
        report[f"ring{m}"] = {"pair": [pair[0] + 1, pair[1] + 1], "best_C": res.best_C,
                              "best_params": res.best_params, "pairwise": pairwise,
                              "evaluations": res.evaluations}
    return report

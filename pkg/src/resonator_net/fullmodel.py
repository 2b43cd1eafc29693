"""Full polariton + waveguide model, used to check the waveguide elimination.

Hilbert space ordering: the polariton sites (2 levels each) come first in
the same order as the effective model, followed by one truncated Fock
space per link. Each waveguide mode ``a_l`` decays through ``kappa_l
F(a_l, a_l)`` and each polariton through ``gamma_i F(P_i, P_i)``, the same
``F`` as in the effective master equation. With this convention the
waveguide amplitude relaxes at ``kappa`` and eliminating it gives exactly
``Gamma = J^2 kappa / (kappa^2 + Delta^2)``.

The lab frame and the effective frame are complex conjugates of each other
(see :mod:`resonator_net.network`), so the effective counterpart of a lab
network is built from phase-flipped drives and includes the elimination's
site self-energy. Only conjugation-invariant quantities (populations,
concurrence, correlations) are compared.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .entanglement import concurrence, partial_trace, populations
from .liouvillian import SIGMA_MINUS, unvec, vec
from .network import Network, Node, PhysicalLink, conjugate_phases, derive_effective, link_detuning
from .steadystate import NoConvergence, steady_state

MAX_FULL_DIM = 1024
# Largest Hilbert dimension for which the dense generator is exponentiated.
EXPM_DIM = 64


class PreconditionError(ValueError):
    pass


class TruncationError(RuntimeError):
    pass


@dataclass(frozen=True)
class FullModelConfig:
    network: Network
    n_max: int = 3
    dt: float | None = None
    t_max: float | None = None

    def __post_init__(self):
        if self.network.mode != "physical":
            raise ValueError("the full model needs a physical-mode network")
        if self.n_max < 2:
            raise ValueError("n_max must be >= 2")
        if self.dim > MAX_FULL_DIM:
            raise ValueError(f"full model dimension {self.dim} exceeds {MAX_FULL_DIM}")

    @property
    def dims(self) -> list[int]:
        return [2] * self.network.n + [self.n_max + 1] * len(self.network.links)

    @property
    def dim(self) -> int:
        return math.prod(self.dims)


def _embed(dims, slot, op):
    out = np.array([[1.0 + 0j]])
    for k, d in enumerate(dims):
        out = np.kron(out, op if k == slot else np.eye(d))
    return out


def destroy(levels: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, levels)), 1).astype(np.complex128)


@dataclass
class FullGenerator:
    config: FullModelConfig
    H: np.ndarray
    jumps: list[tuple[float, np.ndarray]]
    P: list[np.ndarray]
    a: list[np.ndarray]
    _L: np.ndarray | None = field(default=None, repr=False)

    @property
    def dim(self) -> int:
        return self.H.shape[0]

    def rhs(self, rho: np.ndarray) -> np.ndarray:
        out = -1j * (self.H @ rho - rho @ self.H)
        for c, A in self.jumps:
            AdA = A.conj().T @ A
            out += c * (2.0 * A @ rho @ A.conj().T - AdA @ rho - rho @ AdA)
        return out

    def __call__(self, rho):
        return self.rhs(rho)

    def liouvillian(self) -> np.ndarray:
        if self._L is None:
            d = self.dim
            if d * d > 4096:
                raise ValueError(f"dense Liouvillian of dimension {d * d} is too large")
            I = np.eye(d)
            L = -1j * (np.kron(I, self.H) - np.kron(self.H.T, I))
            for c, A in self.jumps:
                AdA = A.conj().T @ A
                L += c * (2.0 * np.kron(A.conj(), A) - np.kron(I, AdA) - np.kron(AdA.T, I))
            self._L = L
        return self._L

    def rate_scale(self) -> float:
        return float(max(np.abs(self.H).max(initial=0.0), max((c for c, _ in self.jumps), default=0.0)))

    def reduce(self, rho: np.ndarray) -> np.ndarray:
        """Trace out every waveguide mode."""
        n = self.config.network.n
        dp = 2 ** n
        dw = self.dim // dp
        return np.einsum("aibi->ab", rho.reshape(dp, dw, dp, dw))

    def photon_numbers(self, rho: np.ndarray) -> list[float]:
        return [float(np.real(np.trace(rho @ (a.conj().T @ a)))) for a in self.a]


def build_full_generator(config: FullModelConfig) -> FullGenerator:
    net = config.network
    dims = config.dims
    n = net.n
    P = [_embed(dims, i, SIGMA_MINUS) for i in range(n)]
    a = [_embed(dims, n + l, destroy(config.n_max + 1)) for l in range(len(net.links))]
    H = np.zeros((config.dim, config.dim), dtype=np.complex128)
    for i, node in enumerate(net.nodes):
        H += (node.omega_p - net.omega_d) * (P[i].conj().T @ P[i])
    for link, al in zip(net.links, a):
        ad = al.conj().T
        S = sum(P[e] for e in link.endpoints)
        H += (link.omega_c - net.omega_d) * (ad @ al)
        H += link.J * (ad @ S + S.conj().T @ al)
        drive = link.alpha * complex(math.cos(link.phi), math.sin(link.phi)) * ad
        H += drive + drive.conj().T
    jumps = [(link.kappa, al) for link, al in zip(net.links, a)]
    jumps += [(node.gamma, p) for node, p in zip(net.nodes, P) if node.gamma > 0]
    return FullGenerator(config, H, jumps, P, a)


def _rk4(f, rho, dt):
    k1 = f(rho)
    k2 = f(rho + 0.5 * dt * k1)
    k3 = f(rho + 0.5 * dt * k2)
    k4 = f(rho + dt * k3)
    return rho + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)


def evolve_full(gen: FullGenerator, rho0: np.ndarray, tol: float = 1e-10,
                dt: float | None = None, t_max: float | None = None) -> np.ndarray:
    """Evolve the full model until ``||d rho/dt|| < tol * s``.

    Small problems advance with the exact propagator ``exp(L dt)`` and
    repeated squaring. Larger ones fall back to fixed-step RK4 on the
    right-hand side.
    """
    s = gen.rate_scale()
    rho = np.array(rho0, dtype=np.complex128)
    if s == 0:
        return rho
    dt = gen.config.dt or dt or 0.02 / s
    t_max = gen.config.t_max or t_max or 1e9 / s
    d = gen.dim
    if d <= EXPM_DIM:
        U = scipy.linalg.expm(gen.liouvillian() * dt)
        v = vec(rho)
        t = dt
        while True:
            v = U @ v
            r = unvec(v, d)
            r = r / np.trace(r).real
            v = vec(r)
            if np.linalg.norm(gen.rhs(r)) < tol * s:
                return 0.5 * (r + r.conj().T)
            if t >= t_max:
                raise NoConvergence(f"full model not stationary after t={t:.3e}")
            U = U @ U
            t *= 2
    if dt * s >= 0.05:
        raise ValueError(f"dt={dt:.3e} too coarse for rate scale {s:.3e}")
    t = 0.0
    while t < t_max:
        rho = _rk4(gen.rhs, rho, dt)
        rho /= np.trace(rho).real
        t += dt
        if np.linalg.norm(gen.rhs(rho)) < tol * s:
            return 0.5 * (rho + rho.conj().T)
    raise NoConvergence(f"full model not stationary after t_max={t_max:.3e}")


def ground_state(gen: FullGenerator) -> np.ndarray:
    rho = np.zeros((gen.dim, gen.dim), dtype=np.complex128)
    rho[0, 0] = 1.0
    return rho


def effective_counterpart(net: Network) -> Network:
    """Effective network describing the same physics as a lab network."""
    return derive_effective(conjugate_phases(net), self_energy=True)


def check_scale_separation(net: Network, factor: float = 10.0) -> None:
    """Require ``kappa_l >= factor * max(Gamma_l, gamma, |Gamma_l x_l|, Gamma_l |y_l|)``."""
    eff = derive_effective(net)
    gamma = max(nd.gamma for nd in net.nodes)
    for i, (link, el) in enumerate(zip(net.links, eff.links)):
        y = link_detuning(net, i) / link.kappa
        scale = max(el.Gamma, gamma, abs(el.Gamma * el.x), el.Gamma * abs(y))
        if link.kappa < factor * scale:
            raise PreconditionError(
                f"link {i + 1}: kappa={link.kappa:.3e} is below {factor:g}x the effective rate scale {scale:.3e}"
            )


def measured_link_rate(net: Network, index: int, n_max: int = 3) -> float:
    """Collective rate of one link read off the full-model spectrum.

    A single endpoint site is coupled to the undriven waveguide with no
    intrinsic loss; its coherence then decays at ``Gamma`` in the effective
    model, so the slowest nonzero Liouvillian eigenvalue gives ``-Gamma``.
    """
    link = net.links[index]
    e = link.endpoints[0]
    probe = Network(
        (Node(omega_p=net.nodes[e].omega_p),),
        (PhysicalLink((0,), J=link.J, alpha=0.0, omega_c=link_detuning(net, index) + net.nodes[e].omega_p,
                      kappa=link.kappa),),
        omega_d=net.nodes[e].omega_p,
    )
    gen = build_full_generator(FullModelConfig(probe, n_max))
    rates = -np.linalg.eigvals(gen.liouvillian()).real
    rates = np.sort(rates[rates > 1e-9 * link.kappa])
    return float(rates[0])


def _pair_concurrences(rho: np.ndarray, n: int) -> dict[str, float]:
    return {f"{i + 1},{j + 1}": concurrence(partial_trace(rho, [i, j]))
            for i, j in itertools.combinations(range(n), 2)}


def _rel_change(a: np.ndarray, b: np.ndarray, floor: float = 1e-3) -> float:
    a, b = np.asarray(a, float), np.asarray(b, float)
    return float(np.max(np.abs(a - b) / np.maximum(np.abs(b), floor), initial=0.0))


def full_steady_state(net: Network, n_max: int, tol: float = 1e-10) -> tuple[np.ndarray, FullGenerator]:
    gen = build_full_generator(FullModelConfig(net, n_max))
    return evolve_full(gen, ground_state(gen), tol=tol), gen


def validate_elimination(net: Network, n_max: int = 3, pair: tuple[int, int] = (0, 1),
                         threshold: float = 0.10, truncation_tol: float = 0.01) -> dict:
    """Compare full-model and effective-model steady states.

    ``deviation`` is the relative concurrence difference on ``pair`` (absolute
    when the effective concurrence is below 1e-3).
    """
    if net.mode != "physical":
        raise ValueError("validation needs a physical-mode network")
    if net.n < 2:
        raise ValueError("validation needs at least two nodes")
    check_scale_separation(net)

    eff = effective_counterpart(net)
    rho_eff = steady_state(eff).rho

    series = []
    reduced = {}
    photons = {}
    for nm in (n_max, n_max + 1):
        rho_full, gen = full_steady_state(net, nm)
        reduced[nm] = gen.reduce(rho_full)
        photons[nm] = gen.photon_numbers(rho_full)
        series.append({
            "n_max": nm,
            "populations": populations(reduced[nm]).tolist(),
            "concurrence": concurrence(partial_trace(reduced[nm], pair)),
            "photon_numbers": photons[nm],
        })
    obs = [np.r_[s["populations"], s["concurrence"]] for s in series]
    truncation_change = _rel_change(obs[1], obs[0])

    c_full = series[0]["concurrence"]
    c_eff = concurrence(partial_trace(rho_eff, pair))
    diff = abs(c_full - c_eff)
    deviation = diff / c_eff if c_eff > 1e-3 else diff
    pop_full = populations(reduced[n_max])
    pop_eff = populations(rho_eff)
    report = {
        "pair": [pair[0] + 1, pair[1] + 1],
        "n_max": n_max,
        "concurrence_full": c_full,
        "concurrence_eff": c_eff,
        "pair_concurrences_full": _pair_concurrences(reduced[n_max], net.n),
        "pair_concurrences_eff": _pair_concurrences(rho_eff, net.n),
        "populations_full": pop_full.tolist(),
        "populations_eff": pop_eff.tolist(),
        "population_deviation": _rel_change(pop_full, pop_eff),
        "deviation": deviation,
        "threshold": threshold,
        "truncation_series": series,
        "truncation_change": truncation_change,
        "photon_numbers": photons[n_max],
        "gamma_check": [
            {"link": i + 1, "Gamma_formula": l.Gamma, "Gamma_full_model": measured_link_rate(net, i, n_max)}
            for i, l in enumerate(derive_effective(net).links)
        ],
        "passed": bool(deviation < threshold and truncation_change < truncation_tol),
    }
    if truncation_change >= truncation_tol:
        raise TruncationError(
            f"observables moved {truncation_change:.2%} from n_max={n_max} to {n_max + 1}")
    return report

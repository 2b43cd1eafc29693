import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from resonator_net.entanglement import concurrence, partial_trace
from resonator_net.liouvillian import build_liouvillian
from resonator_net.network import EffectiveLink, Network, Node, ring, scenario_catalog, set_z
from resonator_net.steadystate import (
    NoConvergence,
    NonUniqueSteadyState,
    evolve_to_steady,
    rate_scale,
    solve_steady,
    steady_state,
)

EFFECTIVE = ["config_i", "config_ii", "config_iii", "config_iii_optimal"]


def two_level(G, x, gamma=0.0):
    return Network((Node(gamma=gamma),), (EffectiveLink((0,), G, complex(x)),))


@pytest.mark.parametrize("G,x,gamma", [(1.0, 0.3, 0.0), (2.0, 1.5, 0.5), (0.1, 10.0, 0.05)])
def test_driven_two_level_population(G, x, gamma):
    # H = g (P + P^dag), decay 2 D: excited population g^2 / (2 g^2 + D^2)
    g, D = G * x, G + gamma
    rho = steady_state(two_level(G, x, gamma)).rho
    assert rho[1, 1].real == pytest.approx(g * g / (2 * g * g + D * D), rel=1e-10)
    # coherence <P> = rho_10: i g D / (2 g^2 + D^2) up to sign convention
    assert abs(rho[0, 1]) == pytest.approx(g * D / (2 * g * g + D * D), rel=1e-10)


def test_undriven_relaxes_to_ground():
    net = ring(3, 1.0, 0j, 15.0, 0.1)
    rho = steady_state(net).rho
    assert rho[0, 0].real == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("name", EFFECTIVE)
def test_steady_state_invariants(name):
    res = steady_state(scenario_catalog(name))
    rho = res.rho
    assert np.abs(rho - rho.conj().T).max() < 1e-10
    assert abs(np.trace(rho) - 1) < 1e-10
    assert np.linalg.eigvalsh(rho).min() > -1e-8
    assert res.residual < 1e-10
    assert res.uniqueness_gap > 1e-7


def test_zero_liouvillian_is_not_unique():
    net = Network((Node(), Node()), (EffectiveLink((0, 1), 0.0),))
    with pytest.raises(NonUniqueSteadyState):
        steady_state(net)


def test_dark_singlet_is_not_unique():
    # one shared lossless waveguide without drive: the singlet decouples
    net = Network((Node(), Node()), (EffectiveLink((0, 1), 1.0, 0j, 0.0),))
    with pytest.raises(NonUniqueSteadyState):
        steady_state(net)


def test_solve_steady_rejects_bad_shape():
    with pytest.raises(ValueError):
        solve_steady(np.eye(5))


def _check_evolution(net, method):
    s = rate_scale(net)
    # measure time in units of the slowest link so the ratio stays fixed
    slow = min(l.Gamma for l in net.links)
    rho0 = np.zeros((2 ** net.n,) * 2, complex)
    rho0[0, 0] = 1
    rho = evolve_to_steady(net, rho0, dt=0.02 / s, t_max=1e6 / slow, tol=1e-11, method=method)
    assert np.abs(rho - steady_state(net).rho).max() < 1e-7


@pytest.mark.parametrize("name", EFFECTIVE)
def test_time_evolution_agrees_with_nullspace(name):
    _check_evolution(scenario_catalog(name), "squaring")


def test_plain_stepping_agrees_with_nullspace():
    net = set_z(ring(2, 1.0, 0.8 + 0.2j, 3.0, 0.0), {0: 1.5, 1: 1.5})
    _check_evolution(net, "stepping")


def test_evolution_step_guard_and_timeout():
    net = scenario_catalog("config_i")
    s = rate_scale(net)
    rho0 = np.diag([1, 0, 0, 0]).astype(complex)
    with pytest.raises(ValueError):
        evolve_to_steady(net, rho0, dt=1.0 / s, t_max=10 / s)
    with pytest.raises(NoConvergence):
        evolve_to_steady(net, rho0, dt=0.01 / s, t_max=0.05 / s, method="stepping")


def gauge(n, theta):
    # U = exp(i theta sum_i n_i)
    counts = np.array([bin(k).count("1") for k in range(2 ** n)])
    return np.diag(np.exp(1j * theta * counts))


@settings(max_examples=25, deadline=None)
@given(theta=st.floats(0, 2 * math.pi))
def test_global_drive_phase_is_a_gauge(theta):
    net = scenario_catalog("config_iii")
    rotated = net.with_links([EffectiveLink(l.endpoints, l.Gamma, l.x * np.exp(1j * theta), l.y)
                              for l in net.links])
    rho = steady_state(net).rho
    rho_r = steady_state(rotated).rho
    U = gauge(3, theta)
    assert np.abs(rho_r - U @ rho @ U.conj().T).max() < 1e-10
    assert concurrence(partial_trace(rho_r, [1, 2])) == pytest.approx(
        concurrence(partial_trace(rho, [1, 2])), abs=1e-10)


@settings(max_examples=25, deadline=None)
@given(n=st.integers(2, 4), G=st.floats(0.05, 2), xr=st.floats(-3, 3), xi=st.floats(-3, 3),
       y=st.floats(-20, 20), z=st.floats(1.01, 5))
def test_random_rings_are_physical(n, G, xr, xi, y, z):
    net = set_z(ring(n, G, complex(xr, xi), y, 0.0), {l: z for l in range(n)})
    res = steady_state(net)
    rho = res.rho
    assert np.abs(rho - rho.conj().T).max() < 1e-10
    assert abs(np.trace(rho).real - 1) < 1e-10
    assert res.min_eigenvalue > -1e-8
    L = build_liouvillian(net).matrix
    assert np.linalg.norm(L @ rho.reshape(-1, order="F")) / np.abs(L).max() < 1e-9

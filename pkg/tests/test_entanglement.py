import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_density
from resonator_net.entanglement import (
    DegenerateDenominator,
    concurrence,
    cross_correlation,
    factorization_diagnostic,
    partial_trace,
    populations,
    wootters_margin,
)


def ket(*amps):
    v = np.array(amps, complex)
    return v / np.linalg.norm(v)


def proj(v):
    return np.outer(v, v.conj())


def werner(p):
    bell = proj(ket(0, 1, -1, 0))
    return p * bell + (1 - p) * np.eye(4) / 4


@pytest.mark.parametrize("bell", [ket(1, 0, 0, 1), ket(1, 0, 0, -1), ket(0, 1, 1, 0), ket(0, 1, -1, 0),
                                  ket(0, 1, 1j, 0)])
def test_bell_states(bell):
    assert concurrence(proj(bell)) == pytest.approx(1.0, abs=1e-9)


def test_product_state():
    a = ket(1, 2j)
    b = ket(3, -1)
    assert concurrence(proj(np.kron(a, b))) == pytest.approx(0.0, abs=1e-9)


@pytest.mark.parametrize("p,expected", [(0.5, 0.25), (1 / 3, 0.0), (0.2, 0.0), (0.9, 0.85)])
def test_werner(p, expected):
    # C = max(0, (3p - 1) / 2)
    assert concurrence(werner(p)) == pytest.approx(expected, abs=1e-9)
    assert wootters_margin(werner(0.0)) == pytest.approx(-0.5, abs=1e-9)


def test_pure_state_formula():
    # |psi> = a|00> + b|11>: C = 2|ab|
    a, b = 0.6, 0.8j
    assert concurrence(proj(ket(a, 0, 0, b))) == pytest.approx(2 * abs(a * b), abs=1e-9)


def test_partial_trace_product(rng):
    rs = [random_density(rng, 2) for _ in range(3)]
    full = np.kron(np.kron(rs[0], rs[1]), rs[2])
    assert np.allclose(partial_trace(full, [1]), rs[1])
    assert np.allclose(partial_trace(full, [0, 2]), np.kron(rs[0], rs[2]))
    # order of keep sets the tensor order
    assert np.allclose(partial_trace(full, [2, 0]), np.kron(rs[2], rs[0]))


def test_partial_trace_validation(rng):
    rho = random_density(rng, 8)
    with pytest.raises(ValueError):
        partial_trace(rho, [0, 0])
    with pytest.raises(IndexError):
        partial_trace(rho, [3])
    with pytest.raises(ValueError):
        partial_trace(np.eye(6) / 6, [0])


def test_populations_and_cross_correlation():
    rho = proj(ket(0, 1, 1, 0))
    assert populations(rho) == pytest.approx([0.5, 0.5])
    # perfectly anticorrelated: <n1 n2> = 0
    assert cross_correlation(rho, 0, 1) == pytest.approx(0.0)
    prod = np.kron(np.diag([0.7, 0.3]), np.diag([0.4, 0.6])).astype(complex)
    assert cross_correlation(prod, 0, 1) == pytest.approx(1.0)
    with pytest.raises(DegenerateDenominator):
        cross_correlation(np.diag([1, 0, 0, 0]).astype(complex), 0, 1)


def test_factorization_diagnostic():
    rho = np.kron(proj(ket(1, 0, 0, 1)), np.diag([1, 0]))
    purity, ground = factorization_diagnostic(rho, 2)
    assert purity == pytest.approx(1.0)
    assert ground == pytest.approx(1.0)


def haar_unitary(rng):
    z = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / abs(np.diag(r)))


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2 ** 31), rank=st.integers(1, 4))
def test_concurrence_bounds_and_local_invariance(seed, rank):
    rng = np.random.default_rng(seed)
    rho = random_density(rng, 4, rank)
    c = concurrence(rho)
    assert -1e-12 <= c <= 1 + 1e-9
    U = np.kron(haar_unitary(rng), haar_unitary(rng))
    assert concurrence(U @ rho @ U.conj().T) == pytest.approx(c, abs=1e-7)
    # swapping the qubits leaves it unchanged
    swap = np.eye(4)[[0, 2, 1, 3]]
    assert concurrence(swap @ rho @ swap) == pytest.approx(c, abs=1e-7)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2 ** 31))
def test_pure_state_matches_reduced_entropy_formula(seed):
    # pure states: C = sqrt(2 (1 - tr rho_A^2))
    rng = np.random.default_rng(seed)
    v = rng.normal(size=4) + 1j * rng.normal(size=4)
    rho = proj(v / np.linalg.norm(v))
    rA = partial_trace(rho, [0])
    expected = np.sqrt(max(0.0, 2 * (1 - np.trace(rA @ rA).real)))
    assert concurrence(rho) == pytest.approx(expected, abs=1e-6)

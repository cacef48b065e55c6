import logging

import numpy as np
import pytest

from qcontrol_cost.core.linalg import gibbs_state
from qcontrol_cost.core.lindblad import (
    SIGMA_X,
    Dissipator,
    OpenSystem,
    amplitude_damping_dissipator,
    annihilation_operator,
    apply_generator,
    bose_occupation,
    depolarizing_dissipator,
    dissipator_apply,
    embed_dissipator,
    evolve,
    invariant_state,
    liouvillian_matrix,
    liouvillian_sparse,
    propagate,
    rk4_step_matrix,
    steady_state,
    steady_state_sector,
    thermal_oscillator_dissipator,
    thermal_qubit_dissipator,
)
from qcontrol_cost.core.types import (
    InvalidInputError,
    NonUniqueSteadyStateError,
    StepSizeError,
)
from qcontrol_cost.tests.conftest import random_density, random_hermitian


def _random_dissipator(rng, n: int, jumps: int = 3) -> Dissipator:
    ops = []
    for _ in range(jumps):
        op = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        ops.append((op, float(rng.uniform(0.05, 1.0))))
    return Dissipator(jumps=tuple(ops), label="random")


def _two_bath_qubit() -> OpenSystem:
    return OpenSystem(np.diag([0.0, 1.0]), (
        thermal_qubit_dissipator(1.0, 2.0, 0.1, label="hot"),
        thermal_qubit_dissipator(1.0, 0.5, 0.2, label="cold"),
    ))


def test_bose_occupation():
    assert bose_occupation(1.0, 0.0) == 0.0
    assert bose_occupation(1.0, 1.0 / np.log(1.5)) == pytest.approx(2.0, rel=1e-12)
    assert bose_occupation(1e-3, 1.0) == pytest.approx(1e3, rel=1e-3)
    with pytest.raises(InvalidInputError):
        bose_occupation(0.0, 1.0)


def test_annihilation_operator():
    a = annihilation_operator(4)
    np.testing.assert_allclose(np.diag(a.conj().T @ a).real, [0, 1, 2, 3])


def test_thermal_qubit_fixed_point(rng):
    for _ in range(20):
        E, T, gamma = rng.uniform(0.1, 3.0), rng.uniform(0.05, 5.0), rng.uniform(0.01, 2.0)
        d = thermal_qubit_dissipator(E, T, gamma)
        assert np.max(np.abs(dissipator_apply(d, gibbs_state(np.diag([0.0, E]), T)))) <= 1e-12


def test_dissipator_matches_explicit_summation(rng):
    n = 3
    d = _random_dissipator(rng, n)
    rho = random_density(rng, n)
    expected = np.zeros((n, n), dtype=complex)
    for op, rate in d.jumps:
        for i in range(n):
            for j in range(n):
                total = 0j
                for k in range(n):
                    for m in range(n):
                        total += op[i, k] * rho[k, m] * np.conj(op[j, m])
                        ldl_ik = sum(np.conj(op[p, i]) * op[p, k] for p in range(n))
                        ldl_mj = sum(np.conj(op[p, m]) * op[p, j] for p in range(n))
                        total -= 0.5 * (ldl_ik * rho[k, j] * (m == j) + rho[i, m] * ldl_mj * (k == i))
                expected[i, j] += rate * total
    np.testing.assert_allclose(dissipator_apply(d, rho), expected, atol=1e-12)


def test_dissipators_preserve_trace_and_hermiticity(rng):
    channels = [
        _random_dissipator(rng, 3),
        depolarizing_dissipator(0.7),
        amplitude_damping_dissipator(0.4),
        thermal_qubit_dissipator(1.0, 0.8, 0.3),
    ]
    for d in channels:
        for _ in range(5):
            rho = random_density(rng, d.dim)
            out = dissipator_apply(d, rho)
            assert abs(np.trace(out)) <= 1e-12
            assert np.max(np.abs(out - out.conj().T)) <= 1e-12


def test_dissipator_validation():
    with pytest.raises(InvalidInputError):
        Dissipator(jumps=((SIGMA_X, -1.0),))
    with pytest.raises(InvalidInputError):
        Dissipator(jumps=((SIGMA_X, 1.0), (np.eye(3), 1.0)))
    with pytest.raises(InvalidInputError, match="not a fixed point"):
        Dissipator(jumps=((np.array([[0, 1], [0, 0]]), 1.0),), invariant_state=np.eye(2) / 2)
    with pytest.raises(InvalidInputError):
        OpenSystem(np.eye(3), (depolarizing_dissipator(1.0),))


def test_liouvillian_matches_direct_action(rng):
    system = OpenSystem(np.diag([0.0, 1.3]), (thermal_qubit_dissipator(1.3, 0.7, 0.2),))
    liou = liouvillian_matrix(system)
    for _ in range(20):
        m = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        np.testing.assert_allclose(liou.apply(m), apply_generator(system, m), atol=1e-11)


def test_sparse_liouvillian_equals_dense(rng):
    system = OpenSystem(random_hermitian(rng, 3), (_random_dissipator(rng, 3, jumps=2),))
    np.testing.assert_allclose(liouvillian_sparse(system).toarray(),
                               liouvillian_matrix(system).matrix, atol=1e-13)


def test_steady_state_two_baths_interpolates():
    system = _two_bath_qubit()
    rho = steady_state(system)
    assert np.max(np.abs(apply_generator(system, rho))) <= 1e-10 * system.max_rate
    excited = rho[1, 1].real
    cold = gibbs_state(np.diag([0.0, 1.0]), 0.5)[1, 1].real
    hot = gibbs_state(np.diag([0.0, 1.0]), 2.0)[1, 1].real
    assert cold < excited < hot


def test_steady_state_matches_long_propagation():
    system = _two_bath_qubit()
    late = propagate(system, np.diag([1.0, 0.0]), t=100.0, dt=0.01)
    np.testing.assert_allclose(late, steady_state(system), atol=1e-7)


def test_degenerate_generator_is_reported():
    decay = np.zeros((4, 4))
    decay[0, 1] = 1.0
    other = np.zeros((4, 4))
    other[2, 3] = 1.0
    system = OpenSystem(np.diag([0.0, 1.0, 0.0, 1.0]),
                        (Dissipator(jumps=((decay, 1.0), (other, 1.0)), label="blocks"),))
    with pytest.raises(NonUniqueSteadyStateError):
        steady_state(system)


def test_invariant_state_of_channel():
    np.testing.assert_allclose(invariant_state(depolarizing_dissipator(0.3)), np.eye(2) / 2,
                               atol=1e-12)
    np.testing.assert_allclose(invariant_state(thermal_qubit_dissipator(1.0, 1.0, 0.5)),
                               gibbs_state(np.diag([0.0, 1.0]), 1.0), atol=1e-12)


def test_pure_decay_is_exponential():
    system = OpenSystem(np.zeros((2, 2)), (amplitude_damping_dissipator(1.0),))
    rho = propagate(system, np.diag([0.0, 1.0]), t=1.0, dt=0.01)
    assert abs(rho[1, 1].real - np.exp(-1.0)) <= 1e-8


def test_depolarizing_action_on_ground_state():
    beta = 0.35
    d = depolarizing_dissipator(beta)
    ground = np.diag([1.0, 0.0])
    np.testing.assert_allclose(dissipator_apply(d, ground), 2 * beta * (np.eye(2) / 2 - ground),
                               atol=1e-15)


def test_depolarizing_bloch_shrink_rate():
    beta = 0.5
    system = OpenSystem(np.zeros((2, 2)), (depolarizing_dissipator(beta),))
    plus = np.full((2, 2), 0.5)
    states = evolve(system, plus, [0.5, 1.0], dt=0.01)
    x = [2 * s[0, 1].real for s in states]
    rate = -np.log(x[1] / x[0]) / 0.5
    assert rate == pytest.approx(2 * beta, rel=1e-8)


def test_oscillator_fixed_point_and_relaxation_rate():
    omega, gamma, n_trunc = 0.1, 0.1, 40
    T = omega / np.log(1.5)
    d = thermal_oscillator_dissipator(omega, T, gamma, n_trunc)
    h = omega * np.diag(np.arange(n_trunc, dtype=float))
    assert np.max(np.abs(dissipator_apply(d, gibbs_state(h, T)))) <= 1e-12

    system = OpenSystem(h, (d,))
    vacuum = np.zeros((n_trunc, n_trunc))
    vacuum[0, 0] = 1.0
    number = np.diag(np.arange(n_trunc, dtype=float))
    (late,) = evolve(system, vacuum, [1.0 / gamma], dt=2e-3)
    n_t = np.trace(late @ number).real
    rate = -np.log((n_t - 2.0) / (0.0 - 2.0)) * gamma
    assert rate == pytest.approx(gamma, rel=0.01)


def test_oscillator_truncation_warning(caplog):
    with caplog.at_level(logging.WARNING, logger="qcontrol_cost"):
        thermal_oscillator_dissipator(1.0, 10.0, 0.1, 5)
    assert "tail mass" in caplog.text


def test_propagation_keeps_states_positive(rng):
    system = OpenSystem(random_hermitian(rng, 3), (_random_dissipator(rng, 3),))
    for _ in range(5):
        rho = propagate(system, random_density(rng, 3), t=1.0, dt=5e-4)
        assert np.linalg.eigvalsh(rho)[0] >= -1e-8
        assert abs(np.trace(rho).real - 1) <= 1e-9


def test_step_size_guard():
    system = _two_bath_qubit()
    with pytest.raises(StepSizeError):
        propagate(system, np.eye(2) / 2, t=10.0, dt=1.0)
    with pytest.raises(InvalidInputError):
        evolve(system, np.eye(2) / 2, [1.0, 0.5], dt=0.01)


def test_rk4_step_matrix_matches_single_step(rng):
    system = _two_bath_qubit()
    rho = random_density(rng, 2)
    step = rk4_step_matrix(system, 0.02)
    via_matrix = (step @ rho.reshape(-1, order="F")).reshape(2, 2, order="F")
    np.testing.assert_allclose(via_matrix, propagate(system, rho, 0.02, 0.02), atol=1e-14)


def test_embedded_channel_acts_on_one_factor(rng):
    d = thermal_qubit_dissipator(1.0, 0.7, 0.3)
    rho, sigma = random_density(rng, 2), random_density(rng, 3)
    on_s = embed_dissipator(d, (2, 3), "S")
    np.testing.assert_allclose(dissipator_apply(on_s, np.kron(rho, sigma)),
                               np.kron(dissipator_apply(d, rho), sigma), atol=1e-14)
    on_a = embed_dissipator(d, (3, 2), "A")
    assert on_a.subsystem == "A"
    np.testing.assert_allclose(dissipator_apply(on_a, np.kron(sigma, rho)),
                               np.kron(sigma, dissipator_apply(d, rho)), atol=1e-14)


def test_sector_solver_matches_dense_steady_state():
    n = 4
    a = annihilation_operator(n)
    eye = np.eye(n)
    a_s, a_a = np.kron(a, eye), np.kron(eye, a)
    h = 0.3 * (a_s.conj().T @ a_a + a_s @ a_a.conj().T)
    system = OpenSystem(h, (
        embed_dissipator(thermal_oscillator_dissipator(1.0, 1.0, 0.1, n), (n, n), "S"),
        embed_dissipator(thermal_oscillator_dissipator(3.0, 1.0, 0.5, n), (n, n), "A"),
    ))
    levels = np.arange(n)
    charges = (levels[:, None] + levels[None, :]).ravel()
    np.testing.assert_allclose(steady_state_sector(system, charges), steady_state(system),
                               atol=1e-10)


def test_fast_qubit_with_slow_damping_is_certified():
    E, T, gamma = 2 * np.pi * 5e9, 2.6e9, 2 * np.pi * 1e3
    system = OpenSystem(np.diag([0.0, E]), (thermal_qubit_dissipator(E, T, gamma),))
    rho = steady_state(system)
    np.testing.assert_allclose(rho, gibbs_state(system.hamiltonian, T), atol=1e-9)
    generator = liouvillian_matrix(system).matrix
    residual = np.max(np.abs(generator @ rho.reshape(-1, order="F")))
    allowance = 1e-10 * system.max_rate + 100 * np.finfo(float).eps * np.max(np.abs(generator))
    assert residual <= allowance

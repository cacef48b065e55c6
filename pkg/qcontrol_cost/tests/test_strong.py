import logging

import numpy as np
import pytest

from qcontrol_cost.core.linalg import gibbs_state, partial_trace
from qcontrol_cost.core.lindblad import embed_dissipator, thermal_qubit_dissipator
from qcontrol_cost.core.strong import (
    InteractionFamily,
    JointStateParametrization,
    gap_shift_family,
    gap_shift_hamiltonian,
    minimize_strong,
    nelder_mead_from_grid,
    strong_objective,
    two_qubit_strong,
)
from qcontrol_cost.core.thermo import min_work_rate
from qcontrol_cost.core.types import DivergentResultError, InvalidInputError
from qcontrol_cost.models.qubit import qubit_cool_power, thermal_qubit_system


def test_grid_then_simplex_finds_quadratic_vertex():
    result = nelder_mead_from_grid(lambda x: (x[0] - 0.3) ** 2 + 1.0, [(-1.0, 1.0)], budget=200)
    assert abs(result.x[0] - 0.3) <= 1e-6
    assert result.fun == pytest.approx(1.0, abs=1e-10)
    assert result.evaluations <= 200
    assert result.simplex_used


def test_pinned_axes_stay_fixed():
    fn = lambda x: (x[0] - 0.25) ** 2 + (x[1] - 3.0) ** 2  # noqa: E731
    result = nelder_mead_from_grid(fn, [(0.0, 1.0), (0.5, 0.5)], budget=150, threads=2)
    assert result.x[1] == 0.5
    assert abs(result.x[0] - 0.25) <= 1e-6


def test_optimizer_guards():
    with pytest.raises(InvalidInputError):
        nelder_mead_from_grid(lambda x: 0.0, [(0.0, 1.0)], budget=50)
    with pytest.raises(InvalidInputError):
        nelder_mead_from_grid(lambda x: 0.0, [(0.0, 1.0)] * 3, budget=100)
    with pytest.raises(DivergentResultError):
        nelder_mead_from_grid(lambda x: np.inf, [(0.0, 1.0)], budget=100)


def test_gap_shift_levels():
    h = gap_shift_hamiltonian(1.0, 20.0, 0.4)
    w = np.linalg.eigvalsh(h)
    assert w[1] - w[0] == pytest.approx(1.4, abs=1e-12)
    assert np.allclose(h, np.diag(np.diag(h)))


@pytest.mark.parametrize("epsilon", [0.0, 0.3, 1.5])
def test_two_qubit_matches_shifted_closed_form(epsilon):
    E, cal_E, T, T_c, gamma = 1.0, 25.0, 1.0, 0.4, 0.1
    value = two_qubit_strong(E, cal_E, epsilon, T, T_c, gamma)
    assert value == pytest.approx(qubit_cool_power(E + epsilon, T, T_c, gamma, "full"), rel=1e-10)


def test_two_qubit_approaches_approximate_form():
    E, epsilon, T, T_c, gamma = 1.0, 2.0, 1.0, 0.1, 0.05
    value = two_qubit_strong(E, 40.0, epsilon, T, T_c, gamma)
    approx = qubit_cool_power(E + epsilon, T, T_c, gamma, "approx")
    assert value == pytest.approx(approx, rel=1e-6)


def test_zero_shift_reduces_to_weak_coupling():
    E, T, T_c, gamma = 1.0, 1.0, 0.5, 0.1
    family, states = gap_shift_family(E, 30.0, 0.0, T_c, gamma, T)
    params = np.array([0.0])
    strong = strong_objective(family, params, states.state(params), T)
    system = thermal_qubit_system(E, T, gamma)
    weak = min_work_rate(system, gibbs_state(system.hamiltonian, T_c), T).min_work_rate
    assert abs(strong - weak) <= 1e-10


def test_gap_shift_preconditions(caplog):
    with pytest.raises(InvalidInputError):
        two_qubit_strong(1.0, 0.5, 0.1, 1.0, 0.5, 0.1)
    with pytest.raises(InvalidInputError):
        two_qubit_strong(1.0, 20.0, 25.0, 1.0, 0.5, 0.1)
    with pytest.raises(InvalidInputError):
        two_qubit_strong(1.0, 20.0, 0.1, 1.0, 0.0, 0.1)
    with caplog.at_level(logging.WARNING, logger="qcontrol_cost"):
        two_qubit_strong(1.0, 5.0, 0.1, 1.0, 0.5, 0.1)
    assert "not frozen" in caplog.text


def test_joint_states_keep_the_target_marginal(rng):
    rho_star = gibbs_state(np.diag([0.0, 1.0]), 0.6)

    def correlation(p):
        c = np.zeros((4, 4), dtype=complex)
        c[0, 3] = c[3, 0] = 0.05 * p[0]
        return c

    states = JointStateParametrization(
        target=rho_star,
        aux_state=lambda p: gibbs_state(np.diag([0.0, 2.0]), 1.0),
        dims=(2, 2),
        correlation=correlation,
    )
    for value in rng.uniform(0.0, 1.0, 10):
        tau = states.state(np.array([value]))
        np.testing.assert_allclose(partial_trace(tau, (2, 2), "S"), rho_star, atol=1e-10)


def test_family_rejects_parameters_outside_allowed_set():
    family, _ = gap_shift_family(1.0, 30.0, 1.0, 0.5, 0.1, 1.0)
    assert family.contains([0.5])
    assert not family.contains([1.5])
    with pytest.raises(InvalidInputError):
        family.build([2.0])
    with pytest.raises(InvalidInputError):
        InteractionFamily(names=("a",), bounds=((1.0, 0.0),), hamiltonian=lambda p: np.eye(2),
                          dissipators=lambda h: (), dims=(2, 1))


def test_minimize_prefers_larger_gap():
    E, cal_E, eps_max, T, T_c, gamma = 2.0, 30.0, 1.0, 1.0, 0.5, 0.1
    family, states = gap_shift_family(E, cal_E, eps_max, T_c, gamma, T)
    best = minimize_strong(family, None, T, budget=120, states=states)
    assert best.params["epsilon"] == pytest.approx(eps_max, abs=1e-6)
    assert best.min_work_rate <= two_qubit_strong(E, cal_E, eps_max, T, T_c, gamma) + 1e-12
    assert best.min_work_rate < two_qubit_strong(E, cal_E, 0.0, T, T_c, gamma)
    assert best.certified is False
    np.testing.assert_allclose(partial_trace(best.tau, (2, 2), "S"),
                               gibbs_state(np.diag([0.0, E + eps_max]), T_c), atol=1e-10)


def test_minimize_with_default_product_states():
    dims = (2, 2)
    sm = np.array([[0, 1], [0, 0]], dtype=complex)
    eye = np.eye(2)
    h_a = np.diag([0.0, 3.0])

    def hamiltonian(p):
        return np.kron(np.diag([0.0, 1.0]), eye) + np.kron(eye, h_a) \
            + p[0] * (np.kron(sm.T, sm) + np.kron(sm, sm.T))

    family = InteractionFamily(
        names=("g",),
        bounds=((0.0, 0.0),),
        hamiltonian=hamiltonian,
        dissipators=lambda h: (
            embed_dissipator(thermal_qubit_dissipator(1.0, 1.0, 0.1, label="bath"), dims, "S"),),
        dims=dims,
        aux_hamiltonian=h_a,
    )
    rho_star = gibbs_state(np.diag([0.0, 1.0]), 0.5)
    best = minimize_strong(family, rho_star, 1.0, budget=100)
    assert best.min_work_rate == pytest.approx(qubit_cool_power(1.0, 1.0, 0.5, 0.1), rel=1e-10)
    with pytest.raises(InvalidInputError):
        minimize_strong(family, None, 1.0)


def test_two_qubit_power_falls_as_the_gap_is_shifted_up():
    E, cal_E, T, T_c, gamma = 2.0, 30.0, 1.0, 0.4, 0.1
    epsilons = np.linspace(0.0, 8.0, 17)
    powers = np.array([two_qubit_strong(E, cal_E, eps, T, T_c, gamma) for eps in epsilons])
    assert np.all(powers > 0)
    assert np.all(np.diff(powers) < 0)

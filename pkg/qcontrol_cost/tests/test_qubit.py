import numpy as np
import pytest

from qcontrol_cost.core.lindblad import bose_occupation
from qcontrol_cost.core.types import InvalidInputError
from qcontrol_cost.models.qubit import qubit_cool_power, qubit_hamiltonian, thermal_qubit_system


def _direct_full(E, T, T_c, gamma):
    z, w = np.exp(E / T), np.exp(E / T_c)
    return gamma * E * (T / T_c - 1) * (w - z) / ((z - 1) * (w + 1))


@pytest.mark.parametrize("E,T,T_c,gamma", [
    (1.0, 1.0, 0.5, 0.1),
    (2.0, 0.5, 0.3, 1.0),
    (0.3, 3.0, 2.0, 0.02),
    (1.0, 1.0, 1.5, 0.1),
])
def test_full_form_matches_direct_expression(E, T, T_c, gamma):
    assert qubit_cool_power(E, T, T_c, gamma) == pytest.approx(_direct_full(E, T, T_c, gamma),
                                                               rel=1e-12)


def test_heating_above_bath_also_costs_work():
    assert qubit_cool_power(1.0, 1.0, 1.5, 0.1) > 0
    assert qubit_cool_power(1.0, 1.0, 0.5, 0.1) > 0


def test_approximate_form_at_low_target_temperature():
    E, T, gamma = 1.0, 1.0, 0.1
    T_c = 0.02
    approx = qubit_cool_power(E, T, T_c, gamma, "approx")
    assert approx == pytest.approx(gamma * bose_occupation(E, T) * E * (T / T_c - 1))
    assert qubit_cool_power(E, T, T_c, gamma, "full") == pytest.approx(approx, rel=1e-9)


def test_limits():
    assert qubit_cool_power(1.0, 1.0, 0.0, 0.1) == np.inf
    assert qubit_cool_power(1.0, 1.0, 1.0, 0.1) == 0.0
    assert qubit_cool_power(1.0, 1.0, 1.0, 0.1, "approx") == 0.0


def test_full_form_does_not_overflow():
    value = qubit_cool_power(1.0, 1e-3, 1e-4, 0.1)
    assert np.isfinite(value)
    assert value >= 0
    deep = qubit_cool_power(50.0, 1.0, 1e-3, 0.1)
    expected = 0.1 * 50.0 * (1.0 / 1e-3 - 1) * np.exp(-50.0) / (1 - np.exp(-50.0))
    assert deep == pytest.approx(expected, rel=1e-12)


def test_rejects_bad_input():
    with pytest.raises(InvalidInputError):
        qubit_cool_power(1.0, 1.0, 0.5, 0.1, mode="exact")
    with pytest.raises(InvalidInputError):
        qubit_cool_power(-1.0, 1.0, 0.5, 0.1)
    with pytest.raises(InvalidInputError):
        qubit_cool_power(1.0, 1.0, -0.5, 0.1)


def test_system_builder():
    np.testing.assert_array_equal(qubit_hamiltonian(2.0), np.diag([0.0, 2.0]))
    system = thermal_qubit_system(2.0, 1.0, 0.3)
    assert system.dim == 2
    assert [d.label for d in system.dissipators] == ["bath"]

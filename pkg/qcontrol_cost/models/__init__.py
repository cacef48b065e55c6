"""
Worked models for qcontrol-cost

- **qubit**: Minimum power to cool a single damped qubit
- **sideband**: Resolved-sideband cooling of a mechanical oscillator
- **devices**: Free-energy cost of gate noise in a quantum computer
"""

from .qubit import qubit_cool_power, qubit_hamiltonian, thermal_qubit_system
from .sideband import (
    RefrigeratorCheck,
    SidebandModel,
    SidebandSteadyState,
    optimal_auxiliary_damping,
    refrigerator_identity,
    scaled_model,
    sideband_efficiency_curve,
    sideband_fock_steady_state,
    sideband_min_power_consistency,
    sideband_steady_state,
    sideband_sweep,
    teufel_model,
    teufel_sweep,
)
from .devices import FreeEnergyLoss, qc_computation_cost, qc_free_energy_loss

__all__ = [
    'qubit_cool_power',
    'qubit_hamiltonian',
    'thermal_qubit_system',
    'RefrigeratorCheck',
    'SidebandModel',
    'SidebandSteadyState',
    'optimal_auxiliary_damping',
    'refrigerator_identity',
    'scaled_model',
    'sideband_efficiency_curve',
    'sideband_fock_steady_state',
    'sideband_min_power_consistency',
    'sideband_steady_state',
    'sideband_sweep',
    'teufel_model',
    'teufel_sweep',
    'FreeEnergyLoss',
    'qc_computation_cost',
    'qc_free_energy_loss',
]

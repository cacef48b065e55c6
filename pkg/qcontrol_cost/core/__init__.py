"""
Core numerical components for qcontrol-cost

- **linalg**: Hermitian eigendecomposition, matrix functions, partial traces, certified solves
- **lindblad**: Dissipators, Liouvillians, steady states and RK4 propagation
- **thermo**: Entropy/energy flows, minimum work rate, Spohn entropy production
- **strong**: Strong-coupling cost over interaction families
- **types**: Type aliases and the exception hierarchy
"""

from .types import *
from .linalg import (
    HermitianSpectrum,
    as_density_matrix,
    gibbs_state,
    haar_random_pure_state,
    hermitian_eig,
    is_density_matrix,
    kron,
    matrix_exp_hermitian,
    matrix_ln_hermitian,
    partial_trace,
    project_marginal,
    solve_linear,
)
from .lindblad import (
    Dissipator,
    Liouvillian,
    OpenSystem,
    amplitude_damping_dissipator,
    bose_occupation,
    depolarizing_dissipator,
    dissipator_apply,
    dressed_thermal_dissipator,
    embed_dissipator,
    evolve,
    invariant_state,
    liouvillian_matrix,
    liouvillian_sparse,
    propagate,
    steady_state,
    steady_state_sector,
    thermal_oscillator_dissipator,
    thermal_qubit_dissipator,
)
from .thermo import (
    ChannelFlow,
    ControlCostReport,
    EnergyBalance,
    ProtocolCheck,
    channel_flows,
    free_energy,
    joint_energy_balance,
    min_work_rate,
    protocol_step_check,
    relative_entropy,
    spohn_entropy_production,
    total_entropy_production,
    trajectory_min_work,
    von_neumann_entropy,
)
from .strong import (
    InteractionFamily,
    JointStateParametrization,
    StrongMinimum,
    gap_shift_family,
    minimize_strong,
    nelder_mead_from_grid,
    strong_objective,
    two_qubit_strong,
)

__all__ = [
    'HermitianSpectrum', 'as_density_matrix', 'gibbs_state', 'haar_random_pure_state',
    'hermitian_eig', 'is_density_matrix', 'kron', 'matrix_exp_hermitian',
    'matrix_ln_hermitian', 'partial_trace', 'project_marginal', 'solve_linear',
    'Dissipator', 'Liouvillian', 'OpenSystem', 'amplitude_damping_dissipator',
    'bose_occupation', 'depolarizing_dissipator', 'dissipator_apply',
    'dressed_thermal_dissipator', 'embed_dissipator', 'evolve', 'invariant_state',
    'liouvillian_matrix', 'liouvillian_sparse', 'propagate', 'steady_state',
    'steady_state_sector', 'thermal_oscillator_dissipator', 'thermal_qubit_dissipator',
    'ChannelFlow', 'ControlCostReport', 'EnergyBalance', 'ProtocolCheck', 'channel_flows',
    'free_energy', 'joint_energy_balance', 'min_work_rate', 'protocol_step_check',
    'relative_entropy', 'spohn_entropy_production', 'total_entropy_production',
    'trajectory_min_work', 'von_neumann_entropy',
    'InteractionFamily', 'JointStateParametrization', 'StrongMinimum', 'gap_shift_family',
    'minimize_strong', 'nelder_mead_from_grid', 'strong_objective', 'two_qubit_strong',
]

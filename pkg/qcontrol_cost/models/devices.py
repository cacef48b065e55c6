"""
Energy cost of restoring qubits degraded by gate noise

Each qubit suffers amplitude damping at rate γ (zero temperature) and
depolarizing at rate β during a gate of duration τ. With p_β = βτ and
p_γ = γτ/2, the free energy lost per qubit is, to leading logarithmic order,

    ΔF ≈ (p_β ln p_β + p_γ ln p_γ) T − p_γ E

Functions here return the work needed to undo it, −ΔF ≥ 0.
"""
import logging
import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
from scipy.special import entr, xlogy

from ..core.linalg import haar_random_pure_state
from ..core.lindblad import (
    STEP_BOUND,
    OpenSystem,
    amplitude_damping_dissipator,
    depolarizing_dissipator,
    rk4_step_matrix,
    spectral_bound,
)
from ..core.types import InvalidInputError

logger = logging.getLogger(__name__)

VALIDITY_LIMIT = 0.05
QC_MODES = ("formula", "monte_carlo")


@dataclass(frozen=True)
class FreeEnergyLoss:
    """Per-qubit work to restore the free energy lost during one gate"""
    work_to_restore: float
    p_beta: float
    p_gamma: float
    valid: bool
    mode: str
    samples: int = 0
    stderr: float = 0.0

    def __float__(self) -> float:
        return self.work_to_restore


def gate_noise_system(gamma: float, beta: float, E: float) -> OpenSystem:
    return OpenSystem(np.diag([0.0, float(E)]),
                      (amplitude_damping_dissipator(gamma), depolarizing_dissipator(beta)))


def gate_channel(gamma: float, beta: float, tau_gate: float) -> np.ndarray:
    """Superoperator of the noise over one gate, on column-stacked vec(ρ)

    The free rotation commutes with both channels and leaves energy and entropy
    unchanged, so only the dissipative part is integrated. Gates may be long
    compared with 1/E.
    """
    noise = OpenSystem(np.zeros((2, 2)), gate_noise_system(gamma, beta, 0.0).dissipators)
    steps = max(1, math.ceil(tau_gate * spectral_bound(noise) / (0.5 * STEP_BOUND)))
    return np.linalg.matrix_power(rk4_step_matrix(noise, tau_gate / steps), steps)


def _monte_carlo(gamma: float, beta: float, tau_gate: float, E: float, T: float,
                 samples: int, seed: Optional[int]) -> tuple:
    step = gate_channel(gamma, beta, tau_gate)
    rng = np.random.default_rng(seed)
    initial = np.stack([haar_random_pure_state(2, rng) for _ in range(samples)])

    vecs = initial.transpose(0, 2, 1).reshape(samples, 4)
    final = (vecs @ step.T).reshape(samples, 2, 2).transpose(0, 2, 1)
    final = 0.5 * (final + final.conj().transpose(0, 2, 1))

    h = np.diag([0.0, float(E)])
    energy_before = np.real(np.einsum("sij,ji->s", initial, h))
    energy_after = np.real(np.einsum("sij,ji->s", final, h))
    entropy_after = np.sum(entr(np.clip(np.linalg.eigvalsh(final), 0.0, None)), axis=1)
    # F(ρ₀) − F(ρ_τ) with S(ρ₀) = 0
    losses = energy_before - energy_after + T * entropy_after
    return float(np.mean(losses)), float(np.std(losses, ddof=1) / np.sqrt(samples))


def qc_free_energy_loss(gamma: float, beta: float, tau_gate: float, E: float, T: float,
                        mode: str = "formula", samples: int = 10_000,
                        seed: Optional[int] = None) -> FreeEnergyLoss:
    if mode not in QC_MODES:
        raise InvalidInputError(f"mode must be one of {QC_MODES}, got {mode!r}")
    if gamma < 0 or beta < 0 or tau_gate <= 0 or E < 0 or T <= 0:
        raise InvalidInputError("Rates and E must be non-negative, tau_gate and T positive")

    p_beta = beta * tau_gate
    p_gamma = gamma * tau_gate / 2.0
    valid = p_beta < VALIDITY_LIMIT and p_gamma < VALIDITY_LIMIT

    if mode == "formula":
        if not valid:
            logger.warning("Error probabilities p_beta=%.3g, p_gamma=%.3g exceed %.2f; "
                           "the leading-log formula is unreliable", p_beta, p_gamma, VALIDITY_LIMIT)
        value = -T * (xlogy(p_beta, p_beta) + xlogy(p_gamma, p_gamma)) + p_gamma * E
        return FreeEnergyLoss(work_to_restore=float(value), p_beta=p_beta, p_gamma=p_gamma,
                              valid=valid, mode=mode)

    if samples < 2:
        raise InvalidInputError("Monte Carlo needs at least two samples")
    mean, stderr = _monte_carlo(gamma, beta, tau_gate, E, T, samples, seed)
    logger.debug("Monte Carlo free-energy loss %.6g ± %.2g over %d states", mean, stderr, samples)
    return FreeEnergyLoss(work_to_restore=mean, p_beta=p_beta, p_gamma=p_gamma, valid=valid,
                          mode=mode, samples=samples, stderr=stderr)


def qc_computation_cost(per_qubit: Union[float, FreeEnergyLoss], M: int) -> float:
    """Minimum energy for a computation touching M qubit-gates: M × per-qubit cost"""
    if isinstance(M, bool) or int(M) != M or M < 0:
        raise InvalidInputError(f"M must be a non-negative integer, got {M}")
    return float(M) * float(per_qubit)

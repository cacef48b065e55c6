"""
Thermodynamic accounting for open quantum systems

Entropies, free energies, per-channel entropy and energy flows, the minimum
steady power needed to hold a target state, Spohn entropy production and the
finite-step control protocol check.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy.special import entr

from .linalg import (
    as_density_matrix,
    check_hermitian,
    hermitian_eig,
    matrix_ln_hermitian,
    max_norm,
)
from .lindblad import Dissipator, OpenSystem, apply_generator, dissipator_apply
from .types import DivergentResultError, InvalidInputError, RealVector

logger = logging.getLogger(__name__)

SUPPORT_LEAK_TOL = 1e-10


@dataclass(frozen=True)
class ChannelFlow:
    """Entropy flow Ṡ = −Tr[D(ρ) ln ρ] and energy flow Ė = Tr[D(ρ) H] of one channel"""
    label: str
    entropy_flow: float
    energy_flow: float
    divergent: bool = False

    def free_energy_rate(self, T: float) -> float:
        """Ḟ = Ė − T·Ṡ"""
        if self.divergent:
            return -np.inf
        return self.energy_flow - T * self.entropy_flow


@dataclass(frozen=True)
class ControlCostReport:
    """Per-channel flows and the minimum work rate for holding a target state"""
    channels: Tuple[ChannelFlow, ...]
    reference_temperature: float
    min_work_rate: float
    divergent: bool

    @property
    def free_energy_rates(self) -> List[float]:
        return [c.free_energy_rate(self.reference_temperature) for c in self.channels]

    @property
    def total_entropy_flow(self) -> float:
        return float(sum(c.entropy_flow for c in self.channels))

    @property
    def total_energy_flow(self) -> float:
        return float(sum(c.energy_flow for c in self.channels))

    def scalar(self) -> float:
        """Ẇ_min as a plain float; a divergent report cannot be collapsed"""
        if self.divergent:
            raise DivergentResultError(
                "Target state is support-deficient: holding it requires an infinite work rate")
        return self.min_work_rate

    def to_frame(self) -> pd.DataFrame:
        rows = [
            {
                "channel": c.label,
                "entropy_flow": c.entropy_flow,
                "energy_flow": c.energy_flow,
                "free_energy_rate": c.free_energy_rate(self.reference_temperature),
                "divergent": c.divergent,
            }
            for c in self.channels
        ]
        rows.append({
            "channel": "total",
            "entropy_flow": self.total_entropy_flow,
            "energy_flow": self.total_energy_flow,
            "free_energy_rate": -self.min_work_rate,
            "divergent": self.divergent,
        })
        return pd.DataFrame(rows)


def von_neumann_entropy(rho) -> float:
    """S = −Tr ρ ln ρ with 0 ln 0 = 0"""
    rho = as_density_matrix(rho)
    w = np.clip(np.linalg.eigvalsh(rho), 0.0, None)
    return float(np.sum(entr(w)))


def _check_temperature(T: float) -> None:
    if not np.isfinite(T) or T <= 0:
        raise InvalidInputError(f"Reference temperature must be positive, got {T}")


def energy(rho, h) -> float:
    return float(np.real(np.trace(as_density_matrix(rho) @ check_hermitian(h, name="H"))))


def free_energy(rho, h, T: float) -> float:
    """F = Tr[ρH] − T·S(ρ)"""
    _check_temperature(T)
    return energy(rho, h) - T * von_neumann_entropy(rho)


def channel_flows(d: Dissipator, rho, h, eig_floor: Optional[float] = None) -> ChannelFlow:
    """Entropy and energy flow of one channel at state ρ.

    When ρ is support-deficient the entropy flow is finite only if D(ρ) puts no
    weight on the null space of ρ; otherwise it is +inf and flagged.
    """
    rho = as_density_matrix(rho)
    h = check_hermitian(h, name="H")
    if rho.shape != h.shape:
        raise InvalidInputError(f"State shape {rho.shape} does not match Hamiltonian {h.shape}")
    d_rho = dissipator_apply(d, rho)
    energy_flow = float(np.real(np.trace(d_rho @ h)))

    log = matrix_ln_hermitian(rho, eig_floor)
    u = log.spectrum.eigenvectors
    in_eigenbasis = np.real(np.diag(u.conj().T @ d_rho @ u))
    support = log.support_mask

    divergent = False
    if log.support_deficient:
        leak = float(np.sum(in_eigenbasis[~support]))
        if leak > SUPPORT_LEAK_TOL * max(d.max_rate, 1.0):
            divergent = True
            logger.debug("channel %s pushes weight %.3e off the target support", d.label, leak)

    if divergent:
        entropy_flow = np.inf
    else:
        lam = log.spectrum.eigenvalues[support]
        entropy_flow = float(-np.sum(in_eigenbasis[support] * np.log(lam)))
    return ChannelFlow(label=d.label, entropy_flow=entropy_flow,
                       energy_flow=energy_flow, divergent=divergent)


def min_work_rate(sys: OpenSystem, rho_star, T: float,
                  eig_floor: Optional[float] = None) -> ControlCostReport:
    """Ẇ_min = Σ_i (T·Ṡ_i − Ė_i) = −Σ_i Tr[D_i(ρ*)(T ln ρ* + H)]"""
    _check_temperature(T)
    rho_star = as_density_matrix(rho_star, name="target state")
    if rho_star.shape != (sys.dim, sys.dim):
        raise InvalidInputError(
            f"Target state has shape {rho_star.shape}, system dimension is {sys.dim}")
    flows = tuple(channel_flows(d, rho_star, sys.hamiltonian, eig_floor) for d in sys.dissipators)
    divergent = any(f.divergent for f in flows)
    if divergent:
        total = np.inf
    else:
        total = float(sum(T * f.entropy_flow - f.energy_flow for f in flows))
    return ControlCostReport(channels=flows, reference_temperature=T,
                             min_work_rate=total, divergent=divergent)


def trajectory_min_work(sys: OpenSystem, path: Sequence, T: float,
                        times: Sequence[float]) -> float:
    """Minimum work to drive the system through ρ*(t): ∫ Ẇ_min[ρ*(t)] dt (trapezoidal)"""
    times = np.asarray(times, dtype=float)
    if len(path) != times.size or times.size < 2:
        raise InvalidInputError("Need at least two states, one per time point")
    steps = np.diff(times)
    if np.any(steps <= 0) or not np.allclose(steps, steps[0], rtol=1e-9, atol=0.0):
        raise InvalidInputError("Trajectory times must form a uniform ascending grid")
    rates = np.array([min_work_rate(sys, rho, T).min_work_rate for rho in path])
    if np.any(np.isinf(rates)):
        return np.inf
    return float(np.trapezoid(rates, times))


def relative_entropy(rho, sigma) -> float:
    """S(ρ‖σ) = Tr ρ(ln ρ − ln σ); +inf unless supp ρ ⊆ supp σ"""
    rho = as_density_matrix(rho, name="rho")
    sigma = as_density_matrix(sigma, name="sigma")
    if rho.shape != sigma.shape:
        raise InvalidInputError("rho and sigma must have the same shape")
    log_sigma = matrix_ln_hermitian(sigma)
    u = log_sigma.spectrum.eigenvectors
    weights = np.real(np.diag(u.conj().T @ rho @ u))
    support = log_sigma.support_mask
    if log_sigma.support_deficient and np.sum(weights[~support]) > SUPPORT_LEAK_TOL:
        return np.inf
    cross = float(-np.sum(weights[support] * np.log(log_sigma.spectrum.eigenvalues[support])))
    return max(cross - von_neumann_entropy(rho), 0.0)


def spohn_entropy_production(d: Dissipator, tau, pi=None) -> float:
    """Σ = −Tr[D(τ)(ln τ − ln π)] for a channel with invariant state π"""
    if pi is None:
        pi = d.invariant_state
    if pi is None:
        raise InvalidInputError(
            f"Channel '{d.label}' has no declared invariant state; pass pi explicitly")
    tau = as_density_matrix(tau, name="tau")
    pi = as_density_matrix(pi, name="pi")
    fixed = max_norm(dissipator_apply(d, pi))
    if fixed > 1e-10 * max(d.max_rate, 1e-300):
        raise InvalidInputError(f"pi is not a fixed point of '{d.label}' (residual {fixed:.3e})")

    log_tau = matrix_ln_hermitian(tau)
    log_pi = matrix_ln_hermitian(pi)
    if log_tau.support_deficient or log_pi.support_deficient:
        raise InvalidInputError("Spohn entropy production needs full-rank tau and pi")
    d_tau = dissipator_apply(d, tau)
    value = float(-np.real(np.trace(d_tau @ (log_tau.matrix - log_pi.matrix))))
    if value < -1e-10 * max(d.max_rate, 1.0):
        logger.warning("Spohn entropy production of '%s' is negative (%.3e)", d.label, value)
    return value


def total_entropy_production(sys: OpenSystem, tau,
                             invariant_states: Optional[Mapping[str, np.ndarray]] = None) -> Dict[str, float]:
    """Spohn entropy production of every channel plus their sum under key 'total'"""
    invariant_states = dict(invariant_states or {})
    result: Dict[str, float] = {}
    for d in sys.dissipators:
        result[d.label] = spohn_entropy_production(d, tau, invariant_states.get(d.label))
    result["total"] = float(sum(result.values()))
    return result


@dataclass(frozen=True)
class EnergyBalance:
    """Steady-state energy bookkeeping of a system coupled to an auxiliary"""
    work_rate: float
    heat_rate_A: float
    energy_flows_S: Dict[str, float]
    entropy_flow_A: float

    @property
    def total_energy_flow_S(self) -> float:
        return float(sum(self.energy_flows_S.values()))


def joint_energy_balance(joint: OpenSystem, tau_ss, dims: Sequence[int], T: float) -> EnergyBalance:
    """−Q̇_A = Ẇ + Σ_i Ė_i at a steady state of the joint generator.

    Q̇_A is the energy flow Tr[D_A(τ) H] from the auxiliary's reservoir; for a
    thermal reservoir at T the entropy it carries is Q̇_A / T.
    """
    _check_temperature(T)
    if int(dims[0]) * int(dims[1]) != joint.dim:
        raise InvalidInputError(f"dims {tuple(dims)} do not match joint dimension {joint.dim}")
    tau = as_density_matrix(tau_ss, name="tau_ss")
    residual = max_norm(apply_generator(joint, tau))
    tol = 1e-9 * max(joint.max_rate, max_norm(joint.hamiltonian), 1.0)
    if residual > tol:
        raise InvalidInputError(
            f"tau_ss is not a steady state of the joint generator (residual {residual:.3e})")

    h = joint.hamiltonian
    heat_a = 0.0
    flows_s: Dict[str, float] = {}
    for d in joint.dissipators:
        flow = float(np.real(np.trace(dissipator_apply(d, tau) @ h)))
        if d.subsystem == "A":
            heat_a += flow
        else:
            flows_s[d.label] = flows_s.get(d.label, 0.0) + flow
    work = -heat_a - sum(flows_s.values())
    return EnergyBalance(work_rate=float(work), heat_rate_A=float(heat_a),
                         energy_flows_S=flows_s, entropy_flow_A=float(heat_a / T))


@dataclass
class ProtocolCheck:
    """Finite-step estimates [F(ρ*) − F(ρ*+L(ρ*)dt)]/dt against Ẇ_min"""
    dts: RealVector
    estimates: RealVector
    min_work_rate: float
    slope: Optional[float]
    limit: float
    converged: bool
    notes: List[str] = field(default_factory=list)

    @property
    def errors(self) -> RealVector:
        return np.abs(self.estimates - self.min_work_rate)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"dt": self.dts, "estimate": self.estimates, "error": self.errors})


SLOPE_WINDOW = (0.85, 1.15)
LIMIT_TOL = 1e-6


def default_protocol_steps(sys: OpenSystem, count: int = 4) -> List[float]:
    """Halving step sizes starting at 10⁻³ of the fastest rate's time scale"""
    scale = sys.max_rate if sys.max_rate > 0 else 1.0
    return [1e-3 / scale / 2 ** k for k in range(count)]


def protocol_step_check(sys: OpenSystem, rho_star, T: float,
                        dt_list: Optional[Sequence[float]] = None) -> ProtocolCheck:
    """Check that one-step reset work converges to Ẇ_min at first order in dt"""
    _check_temperature(T)
    rho_star = as_density_matrix(rho_star, name="target state")
    report = min_work_rate(sys, rho_star, T)
    if report.divergent:
        raise InvalidInputError("Protocol check needs a full-rank target state")
    dts = np.asarray(dt_list if dt_list is not None else default_protocol_steps(sys), dtype=float)
    if dts.size < 2 or np.any(dts <= 0) or np.any(np.diff(dts) >= 0):
        raise InvalidInputError("dt_list needs at least two positive, strictly decreasing steps")

    h = sys.hamiltonian
    drift = apply_generator(sys, rho_star)
    f_star = free_energy(rho_star, h, T)
    estimates = np.array([(f_star - free_energy(rho_star + drift * dt, h, T)) / dt for dt in dts])

    w_min = report.min_work_rate
    errors = np.abs(estimates - w_min)
    scale = max(1.0, abs(w_min))
    notes: List[str] = []

    if max_norm(drift) <= 1e-12 * max(sys.max_rate, 1.0):
        notes.append("target is a fixed point of the dynamics; estimates are exact")
        return ProtocolCheck(dts=dts, estimates=estimates, min_work_rate=w_min,
                             slope=None, limit=float(estimates[-1]), converged=True, notes=notes)

    nonzero = errors > 0
    slope = float(np.polyfit(np.log(dts[nonzero]), np.log(errors[nonzero]), 1)[0])
    limit = float(2.0 * estimates[-1] - estimates[-2])
    slope_ok = SLOPE_WINDOW[0] <= slope <= SLOPE_WINDOW[1]
    limit_ok = abs(limit - w_min) <= LIMIT_TOL * scale
    if not slope_ok:
        notes.append(f"error slope {slope:.3f} outside {SLOPE_WINDOW}")
    if not limit_ok:
        notes.append(f"extrapolated limit off by {abs(limit - w_min):.3e}")
    return ProtocolCheck(dts=dts, estimates=estimates, min_work_rate=w_min, slope=slope,
                         limit=limit, converged=slope_ok and limit_ok, notes=notes)

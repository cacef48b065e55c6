"""
Lindblad dissipators, Liouvillians, steady states and RK4 propagation

Conventions:
- ħ = k_B = 1; energies, temperatures and rates are angular frequencies.
- Basis index 0 is the ground state; σ₋ = |0⟩⟨1|.
- Vectorization stacks columns: vec(ρ)[i + j·d] = ρ[i, j], so
  vec(A ρ B) = (Bᵀ ⊗ A) vec(ρ).
"""
import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .linalg import (
    NEGATIVE_EIG_TOL,
    as_density_matrix,
    as_matrix,
    check_hermitian,
    dagger,
    gibbs_state,
    hermitian_eig,
    hermitize,
    max_norm,
    solve_linear,
)
from .types import (
    ComplexMatrix,
    DensityMatrix,
    InvalidInputError,
    NonUniqueSteadyStateError,
    NumericalError,
    SingularMatrixError,
    StepSizeError,
)

logger = logging.getLogger(__name__)

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
SIGMA_MINUS = np.array([[0, 1], [0, 0]], dtype=np.complex128)
SIGMA_PLUS = SIGMA_MINUS.T.copy()

TAIL_MASS_WARNING = 1e-8
STEP_BOUND = 0.1
TRACE_DRIFT_LIMIT = 1e-6


def bose_occupation(omega: float, T: float) -> float:
    """n̄ = 1/(e^{ω/T} − 1); zero at T = 0"""
    if omega <= 0:
        raise InvalidInputError(f"Mode frequency must be positive, got {omega}")
    if T < 0:
        raise InvalidInputError(f"Temperature must be non-negative, got {T}")
    if T == 0:
        return 0.0
    return float(1.0 / np.expm1(omega / T))


def annihilation_operator(n_trunc: int) -> ComplexMatrix:
    """Truncated a with a|k⟩ = √k |k−1⟩"""
    if n_trunc < 2:
        raise InvalidInputError("Fock truncation must keep at least two levels")
    return np.diag(np.sqrt(np.arange(1, n_trunc, dtype=float)), k=1).astype(np.complex128)


@dataclass(frozen=True)
class Dissipator:
    """One noise channel: Σ_k rate_k (L_k ρ L_k† − ½{L_k†L_k, ρ})"""
    jumps: Tuple[Tuple[ComplexMatrix, float], ...]
    label: str = "dissipator"
    invariant_state: Optional[DensityMatrix] = None
    bath_temperature: Optional[float] = None
    subsystem: str = "S"

    def __post_init__(self):
        jumps = tuple((as_matrix(op, f"{self.label} jump operator"), float(rate))
                      for op, rate in self.jumps)
        if not jumps:
            raise InvalidInputError(f"Dissipator '{self.label}' has no jump operators")
        dim = jumps[0][0].shape[0]
        for op, rate in jumps:
            if op.shape != (dim, dim):
                raise InvalidInputError(
                    f"Dissipator '{self.label}' mixes operator shapes {op.shape} and {(dim, dim)}")
            if not np.isfinite(rate) or rate < 0:
                raise InvalidInputError(f"Dissipator '{self.label}' has invalid rate {rate}")
        if self.subsystem not in ("S", "A"):
            raise InvalidInputError(f"subsystem must be 'S' or 'A', got {self.subsystem!r}")
        object.__setattr__(self, "jumps", jumps)

        if self.invariant_state is not None:
            pi = as_density_matrix(self.invariant_state, name=f"{self.label} invariant state")
            if pi.shape != (dim, dim):
                raise InvalidInputError(f"Invariant state of '{self.label}' has wrong shape")
            object.__setattr__(self, "invariant_state", pi)
            residual = max_norm(dissipator_apply(self, pi))
            if residual > 1e-10 * max(self.max_rate, 1e-300):
                raise InvalidInputError(
                    f"Declared invariant state of '{self.label}' is not a fixed point "
                    f"(residual {residual:.3e})")

    @property
    def dim(self) -> int:
        return self.jumps[0][0].shape[0]

    @property
    def max_rate(self) -> float:
        return max(rate for _, rate in self.jumps)


@dataclass(frozen=True)
class OpenSystem:
    """Hamiltonian plus noise channels; ρ̇ = −i[H, ρ] + Σ_i D_i(ρ)"""
    hamiltonian: ComplexMatrix
    dissipators: Tuple[Dissipator, ...] = field(default_factory=tuple)

    def __post_init__(self):
        h = check_hermitian(self.hamiltonian, name="Hamiltonian")
        object.__setattr__(self, "hamiltonian", h)
        dissipators = tuple(self.dissipators)
        for d in dissipators:
            if d.dim != h.shape[0]:
                raise InvalidInputError(
                    f"Dissipator '{d.label}' acts on dimension {d.dim}, Hamiltonian on {h.shape[0]}")
        object.__setattr__(self, "dissipators", dissipators)

    @property
    def dim(self) -> int:
        return self.hamiltonian.shape[0]

    @property
    def max_rate(self) -> float:
        return max((d.max_rate for d in self.dissipators), default=0.0)


@dataclass(frozen=True)
class Liouvillian:
    """Dense d²×d² generator acting on column-stacked vec(ρ)"""
    matrix: ComplexMatrix
    dim: int
    convention: str = "column-stacking"

    def apply(self, rho) -> ComplexMatrix:
        v = np.asarray(rho, dtype=np.complex128).reshape(-1, order="F")
        return (self.matrix @ v).reshape(self.dim, self.dim, order="F")


def dissipator_apply(d: Dissipator, rho) -> ComplexMatrix:
    rho = as_matrix(rho, "rho")
    if rho.shape != (d.dim, d.dim):
        raise InvalidInputError(
            f"State has shape {rho.shape}, dissipator '{d.label}' acts on dimension {d.dim}")
    out = np.zeros_like(rho)
    for op, rate in d.jumps:
        if rate == 0.0:
            continue
        op_dag = dagger(op)
        ldl = op_dag @ op
        out += rate * (op @ rho @ op_dag - 0.5 * (ldl @ rho + rho @ ldl))
    return out


def apply_generator(sys: OpenSystem, rho) -> ComplexMatrix:
    """−i[H, ρ] + Σ_i D_i(ρ) in matrix form"""
    rho = as_matrix(rho, "rho")
    h = sys.hamiltonian
    out = -1j * (h @ rho - rho @ h)
    for d in sys.dissipators:
        out += dissipator_apply(d, rho)
    return out


def _dissipator_superoperator(d: Dissipator) -> Optional[ComplexMatrix]:
    eye = np.eye(d.dim)
    total = None
    for op, rate in d.jumps:
        if rate == 0.0:
            continue
        ldl = dagger(op) @ op
        term = rate * (np.kron(op.conj(), op) - 0.5 * np.kron(eye, ldl) - 0.5 * np.kron(ldl.T, eye))
        total = term if total is None else total + term
    return total


def liouvillian_matrix(sys: OpenSystem) -> Liouvillian:
    n = sys.dim
    eye = np.eye(n)
    h = sys.hamiltonian
    mat = -1j * (np.kron(eye, h) - np.kron(h.T, eye))
    for d in sys.dissipators:
        block = _dissipator_superoperator(d)
        if block is not None:
            mat = mat + block
    return Liouvillian(matrix=mat, dim=n)


def liouvillian_sparse(sys: OpenSystem) -> sp.csr_matrix:
    """Same generator as `liouvillian_matrix`, assembled in CSR format"""
    n = sys.dim
    eye = sp.identity(n, dtype=np.complex128, format="csr")
    h = sp.csr_matrix(sys.hamiltonian)
    mat = -1j * (sp.kron(eye, h) - sp.kron(h.T, eye))
    for d in sys.dissipators:
        for op, rate in d.jumps:
            if rate == 0.0:
                continue
            op_s = sp.csr_matrix(op)
            ldl = (op_s.conj().T @ op_s).tocsr()
            mat = mat + rate * (sp.kron(op_s.conj(), op_s)
                                - 0.5 * sp.kron(eye, ldl) - 0.5 * sp.kron(ldl.T, eye))
    return sp.csr_matrix(mat)


def _certify_state(rho: ComplexMatrix, residual: float, tol: float, what: str) -> DensityMatrix:
    if residual > tol:
        raise NumericalError(f"{what} residual {residual:.3e} exceeds tolerance {tol:.3e}")
    rho = hermitize(rho)
    rho = rho / np.trace(rho).real
    spec = hermitian_eig(rho, tol=1e-8)
    lowest = spec.eigenvalues[0]
    if lowest < -NEGATIVE_EIG_TOL:
        raise NumericalError(f"{what} has a negative eigenvalue {lowest:.3e}")
    if lowest < 0:
        rho = spec.apply(lambda w: np.clip(w, 0.0, None))
        rho = hermitize(rho / np.trace(rho).real)
    return rho


def _residual_tolerance(sys: OpenSystem, generator_scale: float) -> float:
    """Certification bound on ‖L(ρ)‖_max for a computed steady state.

    1e-10 × (largest rate) plus a round-off allowance of 100 ε_mach × ‖L‖_max.
    When ‖H‖ dominates the rates (GHz gaps against kHz damping) the allowance
    dominates, and the bound is looser than the rate term alone.
    """
    return 1e-10 * sys.max_rate + 100 * np.finfo(float).eps * generator_scale


def steady_state(sys: OpenSystem) -> DensityMatrix:
    """Unique trace-one fixed point of the generator.

    Row 0 of L (the (0,0) population equation, redundant by trace preservation)
    is replaced with the trace constraint and the system is solved by pivoted LU.
    A singular system means the null space is degenerate.
    """
    n = sys.dim
    liou = liouvillian_matrix(sys).matrix
    a = liou.copy()
    a[0, :] = 0.0
    a[0, np.arange(n) * (n + 1)] = 1.0
    b = np.zeros(n * n, dtype=np.complex128)
    b[0] = 1.0
    try:
        x = solve_linear(a, b)
    except SingularMatrixError as exc:
        raise NonUniqueSteadyStateError(
            f"Generator has no unique steady state: {exc}") from exc

    rho = x.reshape(n, n, order="F")
    residual = max_norm((liou @ x))
    logger.debug("steady_state dim=%d residual=%.3e", n, residual)
    if residual > 1e-10 * sys.max_rate:
        logger.info("Steady-state residual %.3e exceeds 1e-10 x max rate (%.3e); "
                    "checked against the round-off allowance instead", residual, 1e-10 * sys.max_rate)
    return _certify_state(rho, residual, _residual_tolerance(sys, max_norm(liou)), "Steady state")


def steady_state_sector(sys: OpenSystem, charges: Sequence[int]) -> DensityMatrix:
    """Steady state of a generator that conserves a U(1) charge difference.

    Only coherences |i⟩⟨j| with charges[i] == charges[j] are kept; the reduced
    sparse system is solved directly. Valid when every jump operator shifts the
    charge by a fixed amount and the Hamiltonian conserves it.
    """
    q = np.asarray(charges)
    n = sys.dim
    if q.shape != (n,):
        raise InvalidInputError(f"Need one charge per basis state ({n}), got {q.shape}")
    rows, cols = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    vec_index = rows + cols * n
    keep = np.sort(vec_index[q[:, None] == q[None, :]])

    liou = liouvillian_sparse(sys)
    block = liou[keep][:, keep].tocsr()

    diag_positions = np.flatnonzero(np.isin(keep, np.arange(n) * (n + 1)))
    mask = np.ones(keep.size)
    mask[0] = 0.0
    trace_row = sp.csr_matrix((np.ones(diag_positions.size), (np.zeros(diag_positions.size, dtype=int),
                                                              diag_positions)), shape=(keep.size, keep.size))
    system = (sp.diags(mask) @ block + trace_row).tocsc()
    rhs = np.zeros(keep.size, dtype=np.complex128)
    rhs[0] = 1.0

    x = spla.spsolve(system, rhs)
    if not np.all(np.isfinite(x)):
        raise NonUniqueSteadyStateError("Sector generator is singular")

    full = np.zeros(n * n, dtype=np.complex128)
    full[keep] = x
    residual = float(np.max(np.abs(block @ x)))
    logger.debug("steady_state_sector dim=%d unknowns=%d residual=%.3e", n, keep.size, residual)
    scale = float(np.max(np.abs(block.data))) if block.nnz else 0.0
    return _certify_state(full.reshape(n, n, order="F"), residual,
                          _residual_tolerance(sys, scale), "Sector steady state")


def invariant_state(d: Dissipator, dim: Optional[int] = None) -> DensityMatrix:
    """Fixed point of the channel alone (no Hamiltonian)"""
    dim = d.dim if dim is None else dim
    if dim != d.dim:
        raise InvalidInputError(f"Dissipator '{d.label}' acts on dimension {d.dim}, not {dim}")
    try:
        return steady_state(OpenSystem(np.zeros((dim, dim)), (d,)))
    except NonUniqueSteadyStateError as exc:
        raise NonUniqueSteadyStateError(
            f"Dissipator '{d.label}' has no unique invariant state; supply it explicitly") from exc


def spectral_bound(sys: OpenSystem) -> float:
    """Cheap upper bound on the generator's spectral radius"""
    bound = 2.0 * np.linalg.norm(sys.hamiltonian, 2)
    for d in sys.dissipators:
        for op, rate in d.jumps:
            bound += 2.0 * rate * np.linalg.norm(op, 2) ** 2
    return float(bound)


def _rk4_step(sys: OpenSystem, rho: ComplexMatrix, h: float) -> ComplexMatrix:
    k1 = apply_generator(sys, rho)
    k2 = apply_generator(sys, rho + 0.5 * h * k1)
    k3 = apply_generator(sys, rho + 0.5 * h * k2)
    k4 = apply_generator(sys, rho + h * k3)
    return hermitize(rho + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4))


def _check_step(sys: OpenSystem, dt: float) -> None:
    if dt <= 0:
        raise InvalidInputError(f"Time step must be positive, got {dt}")
    product = dt * spectral_bound(sys)
    if product >= STEP_BOUND:
        raise StepSizeError(
            f"dt·‖L‖ = {product:.3g} exceeds {STEP_BOUND}; reduce the step below "
            f"{STEP_BOUND / spectral_bound(sys):.3e}")


def propagate(sys: OpenSystem, rho0, t: float, dt: float) -> DensityMatrix:
    """Classical RK4 from ρ(0) = rho0 to time t with steps no larger than dt"""
    rho = as_density_matrix(rho0, name="rho0")
    if rho.shape != (sys.dim, sys.dim):
        raise InvalidInputError(f"rho0 has shape {rho.shape}, system dimension is {sys.dim}")
    if t < 0:
        raise InvalidInputError("Propagation time must be non-negative")
    if t == 0:
        return rho.copy()
    _check_step(sys, dt)

    steps = max(1, math.ceil(t / dt - 1e-12))
    h = t / steps
    for _ in range(steps):
        rho = _rk4_step(sys, rho, h)
    drift = abs(np.trace(rho).real - 1.0)
    if drift > TRACE_DRIFT_LIMIT:
        raise StepSizeError(f"Trace drifted by {drift:.3e} during propagation")
    return rho


def evolve(sys: OpenSystem, rho0, times: Sequence[float], dt: float) -> List[DensityMatrix]:
    """States at each requested (ascending, non-negative) time"""
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or np.any(times < 0) or np.any(np.diff(times) < 0):
        raise InvalidInputError("times must be a non-negative ascending sequence")
    rho = as_density_matrix(rho0, name="rho0")
    _check_step(sys, dt)

    states = []
    now = 0.0
    for target in times:
        span = target - now
        if span > 0:
            steps = max(1, math.ceil(span / dt - 1e-12))
            h = span / steps
            for _ in range(steps):
                rho = _rk4_step(sys, rho, h)
            now = target
        states.append(rho.copy())
    drift = abs(np.trace(rho).real - 1.0)
    if drift > TRACE_DRIFT_LIMIT:
        raise StepSizeError(f"Trace drifted by {drift:.3e} during propagation")
    return states


def rk4_step_matrix(sys: OpenSystem, dt: float) -> ComplexMatrix:
    """The linear map of one RK4 step on vec(ρ): Σ_{k≤4} (dt·L)^k / k!"""
    _check_step(sys, dt)
    lh = dt * liouvillian_matrix(sys).matrix
    step = np.eye(lh.shape[0], dtype=np.complex128)
    term = step.copy()
    for k in range(1, 5):
        term = term @ lh / k
        step = step + term
    return step


# Channel constructors ------------------------------------------------------

def thermal_qubit_dissipator(E: float, T: float, gamma: float, label: str = "thermal") -> Dissipator:
    """Emission σ₋ at γ(n_T + 1), absorption σ₊ at γ n_T; fixed point Gibbs(E, T)"""
    if E <= 0 or gamma <= 0:
        raise InvalidInputError("Thermal qubit needs E > 0 and gamma > 0")
    n_t = bose_occupation(E, T)
    h = np.diag([0.0, E])
    return Dissipator(
        jumps=((SIGMA_MINUS, gamma * (n_t + 1.0)), (SIGMA_PLUS, gamma * n_t)),
        label=label,
        invariant_state=gibbs_state(h, T),
        bath_temperature=T,
    )


def thermal_oscillator_dissipator(omega: float, T: float, gamma: float, n_trunc: int,
                                  label: str = "thermal") -> Dissipator:
    """a at γ(n̄+1), a† at γ n̄ on a truncated Fock space"""
    if gamma <= 0:
        raise InvalidInputError("Damping rate must be positive")
    n_bar = bose_occupation(omega, T)
    a = annihilation_operator(n_trunc)
    tail = (n_bar / (n_bar + 1.0)) ** n_trunc if n_bar > 0 else 0.0
    if tail > TAIL_MASS_WARNING:
        logger.warning("Fock truncation %d leaves thermal tail mass %.2e (n̄ = %.3g); "
                       "consider n_trunc ≥ %d", n_trunc, tail, n_bar, int(5 * (n_bar + 1)) + 1)
    jumps: List[Tuple[ComplexMatrix, float]] = [(a, gamma * (n_bar + 1.0))]
    if n_bar > 0:
        jumps.append((dagger(a), gamma * n_bar))
    h = omega * np.diag(np.arange(n_trunc, dtype=float))
    return Dissipator(
        jumps=tuple(jumps),
        label=label,
        invariant_state=gibbs_state(h, T),
        bath_temperature=T,
    )


def depolarizing_dissipator(beta: float, label: str = "depolarizing") -> Dissipator:
    """σ_x, σ_y, σ_z each at β/2, i.e. −(β/4) Σ_j [σ_j, [σ_j, ρ]]"""
    if beta < 0:
        raise InvalidInputError("Depolarizing rate must be non-negative")
    return Dissipator(
        jumps=((SIGMA_X, beta / 2), (SIGMA_Y, beta / 2), (SIGMA_Z, beta / 2)),
        label=label,
        invariant_state=np.eye(2) / 2,
    )


def amplitude_damping_dissipator(gamma: float, label: str = "amplitude_damping") -> Dissipator:
    """Zero-temperature decay σ₋ at rate γ"""
    if gamma < 0:
        raise InvalidInputError("Damping rate must be non-negative")
    return Dissipator(
        jumps=((SIGMA_MINUS, gamma),),
        label=label,
        invariant_state=np.diag([1.0, 0.0]),
        bath_temperature=0.0,
    )


def dressed_thermal_dissipator(h, lower: int, upper: int, gamma: float, T: float,
                               label: str = "dressed_thermal", subsystem: str = "S") -> Dissipator:
    """Thermal channel between two eigenlevels of `h` (indices in ascending order).

    Rates obey detailed balance at T on the Bohr frequency e[upper] − e[lower].
    """
    spec = hermitian_eig(h)
    n = spec.eigenvalues.size
    if not (0 <= lower < n and 0 <= upper < n):
        raise InvalidInputError(f"Level indices ({lower}, {upper}) out of range for dimension {n}")
    gap = spec.eigenvalues[upper] - spec.eigenvalues[lower]
    if gap <= 0:
        raise InvalidInputError(f"Level {upper} must lie above level {lower} (gap {gap:.3e})")
    if gamma <= 0:
        raise InvalidInputError("Damping rate must be positive")
    u = spec.eigenvectors
    down = np.outer(u[:, lower], u[:, upper].conj())
    n_t = bose_occupation(gap, T)
    jumps: List[Tuple[ComplexMatrix, float]] = [(down, gamma * (n_t + 1.0))]
    if n_t > 0:
        jumps.append((dagger(down), gamma * n_t))
    logger.debug("dressed channel %s: gap %.6g, n = %.3e", label, gap, n_t)
    return Dissipator(jumps=tuple(jumps), label=label, bath_temperature=T, subsystem=subsystem)


def embed_dissipator(d: Dissipator, dims: Sequence[int], subsystem: str) -> Dissipator:
    """Lift a channel on S (left factor) or A (right factor) to S⊗A"""
    d_s, d_a = int(dims[0]), int(dims[1])
    if subsystem == "S":
        if d.dim != d_s:
            raise InvalidInputError(f"'{d.label}' acts on dimension {d.dim}, S has {d_s}")
        lift = lambda op: np.kron(op, np.eye(d_a))  # noqa: E731
    elif subsystem == "A":
        if d.dim != d_a:
            raise InvalidInputError(f"'{d.label}' acts on dimension {d.dim}, A has {d_a}")
        lift = lambda op: np.kron(np.eye(d_s), op)  # noqa: E731
    else:
        raise InvalidInputError(f"subsystem must be 'S' or 'A', got {subsystem!r}")
    return Dissipator(
        jumps=tuple((lift(op), rate) for op, rate in d.jumps),
        label=d.label,
        bath_temperature=d.bath_temperature,
        subsystem=subsystem,
    )

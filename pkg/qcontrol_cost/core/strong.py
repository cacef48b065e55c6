"""
Strong-coupling control cost

The system S is joined to an auxiliary A through a parametrized joint
Hamiltonian; the environment's channels are rebuilt from the joint spectrum.
The cost of a joint state τ with Tr_A τ = ρ* is −Σ_i Tr[D_i(τ)(T ln τ + 𝓗)],
minimized over the family's parameters by a grid seed plus Nelder-Mead.
Minima are local: nothing here certifies global optimality.
"""
import itertools
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Dict, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.optimize import minimize

from .linalg import (
    as_density_matrix,
    check_hermitian,
    gibbs_state,
    max_norm,
    partial_trace,
    project_marginal,
)
from .lindblad import Dissipator, OpenSystem, dressed_thermal_dissipator
from .thermo import min_work_rate
from .types import ComplexMatrix, DivergentResultError, InvalidInputError

logger = logging.getLogger(__name__)

GRID_RESOLUTION = 8
MIN_BUDGET = 100
MARGINAL_TOL = 1e-10

ParamVector = np.ndarray
StateSource = Union[np.ndarray, Callable[[ParamVector], np.ndarray]]


@dataclass(frozen=True)
class InteractionFamily:
    """Joint Hamiltonians 𝓗(p) on S⊗A with the channels the environment induces on them.

    The allowed interaction set is the parameter box `bounds`, optionally narrowed
    by the `allowed` predicate.
    """
    names: Tuple[str, ...]
    bounds: Tuple[Tuple[float, float], ...]
    hamiltonian: Callable[[ParamVector], ComplexMatrix]
    dissipators: Callable[[ComplexMatrix], Sequence[Dissipator]]
    dims: Tuple[int, int]
    aux_hamiltonian: Optional[ComplexMatrix] = None
    allowed: Optional[Callable[[ParamVector], bool]] = None

    def __post_init__(self):
        if len(self.names) != len(self.bounds):
            raise InvalidInputError("Each family parameter needs exactly one (low, high) bound")
        for name, (low, high) in zip(self.names, self.bounds):
            if not (np.isfinite(low) and np.isfinite(high)) or high < low:
                raise InvalidInputError(f"Parameter '{name}' has invalid bounds ({low}, {high})")

    def contains(self, params) -> bool:
        p = np.asarray(params, dtype=float)
        if p.shape != (len(self.names),):
            return False
        for value, (low, high) in zip(p, self.bounds):
            if value < low - 1e-12 or value > high + 1e-12:
                return False
        return True if self.allowed is None else bool(self.allowed(p))

    def build(self, params) -> OpenSystem:
        p = np.asarray(params, dtype=float)
        if not self.contains(p):
            raise InvalidInputError(f"Parameters {p.tolist()} lie outside the allowed interaction set")
        h = check_hermitian(self.hamiltonian(p), name="joint Hamiltonian")
        if h.shape != (self.dims[0] * self.dims[1],) * 2:
            raise InvalidInputError(f"Joint Hamiltonian has shape {h.shape}, dims are {self.dims}")
        return OpenSystem(h, tuple(self.dissipators(h)))


@dataclass(frozen=True)
class JointStateParametrization:
    """τ(p) = ρ*(p) ⊗ σ_A(p), optionally plus a correlation term projected onto Tr_A τ = ρ*"""
    target: StateSource
    aux_state: Callable[[ParamVector], np.ndarray]
    dims: Tuple[int, int]
    correlation: Optional[Callable[[ParamVector], np.ndarray]] = None

    def target_at(self, params) -> np.ndarray:
        rho = self.target(np.asarray(params, dtype=float)) if callable(self.target) else self.target
        return as_density_matrix(rho, name="target state")

    def state(self, params) -> np.ndarray:
        p = np.asarray(params, dtype=float)
        rho_star = self.target_at(p)
        sigma = as_density_matrix(self.aux_state(p), name="auxiliary state")
        if rho_star.shape[0] != self.dims[0] or sigma.shape[0] != self.dims[1]:
            raise InvalidInputError(f"State factors do not match dims {self.dims}")
        tau = np.kron(rho_star, sigma)
        if self.correlation is not None:
            tau = project_marginal(tau + self.correlation(p), rho_star, self.dims)
        tau = as_density_matrix(tau, name="joint state")
        defect = max_norm(partial_trace(tau, self.dims, "S") - rho_star)
        if defect > MARGINAL_TOL:
            raise InvalidInputError(f"Joint state violates Tr_A τ = ρ* by {defect:.3e}")
        return tau


@dataclass(frozen=True)
class OptimizationResult:
    x: np.ndarray
    fun: float
    evaluations: int
    grid_best: float
    simplex_used: bool


@dataclass(frozen=True)
class StrongMinimum:
    """Best (parameters, joint state, power) found; `certified` is always False"""
    params: Dict[str, float]
    tau: np.ndarray
    min_work_rate: float
    evaluations: int
    certified: bool = False


def strong_objective(family: InteractionFamily, params, tau, T: float) -> float:
    """−Σ_i Tr[D_i(τ)(T ln τ + 𝓗)] for 𝓗 = family(params); +inf when divergent"""
    joint = family.build(params)
    return min_work_rate(joint, tau, T).min_work_rate


def _grid(bounds: Sequence[Tuple[float, float]], resolution: int):
    axes = [np.linspace(low, high, resolution) if high > low else np.array([low])
            for low, high in bounds]
    return [np.array(point) for point in itertools.product(*axes)]


def nelder_mead_from_grid(fn: Callable[[np.ndarray], float],
                          bounds: Sequence[Tuple[float, float]],
                          budget: int,
                          tol: float = 1e-8,
                          resolution: int = GRID_RESOLUTION,
                          threads: int = 1) -> OptimizationResult:
    """Coarse grid (endpoints included) followed by bounded Nelder-Mead from the best point"""
    if budget < MIN_BUDGET:
        raise InvalidInputError(f"Evaluation budget must be at least {MIN_BUDGET}, got {budget}")
    bounds = [(float(low), float(high)) for low, high in bounds]
    points = _grid(bounds, resolution)
    if len(points) > budget:
        raise InvalidInputError(
            f"Seed grid needs {len(points)} evaluations, more than the budget {budget}")

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            values = np.array(list(pool.map(fn, points)), dtype=float)
    else:
        values = np.array([fn(p) for p in points], dtype=float)
    if not np.any(np.isfinite(values)):
        raise DivergentResultError("Objective is divergent at every grid point")

    best = int(np.nanargmin(np.where(np.isfinite(values), values, np.nan)))
    x0, f0 = points[best], float(values[best])
    evaluations = len(points)
    logger.debug("grid stage: %d points, best %.6g at %s", len(points), f0, x0.tolist())

    # Zero-width axes stay pinned; the simplex only moves the free ones
    free = [i for i, (low, high) in enumerate(bounds) if high > low]
    remaining = budget - evaluations
    if not free or remaining < 2 * (len(free) + 1):
        return OptimizationResult(x=x0, fun=f0, evaluations=evaluations,
                                  grid_best=f0, simplex_used=False)

    free_bounds = [bounds[i] for i in free]
    lows = np.array([b[0] for b in free_bounds])
    highs = np.array([b[1] for b in free_bounds])

    def embed(y):
        x = x0.copy()
        x[free] = np.clip(y, lows, highs)
        return x

    y0 = x0[free]
    simplex = [y0.copy()]
    for k, (low, high) in enumerate(free_bounds):
        step = (high - low) / max(resolution - 1, 1) / 2
        vertex = y0.copy()
        vertex[k] = y0[k] + step if y0[k] + step <= high else y0[k] - step
        simplex.append(vertex)

    counter = {"n": 0}

    def counted(y):
        counter["n"] += 1
        value = fn(embed(y))
        return value if np.isfinite(value) else np.inf

    result = minimize(counted, y0, method="Nelder-Mead", bounds=free_bounds,
                      options={"maxfev": remaining, "fatol": tol, "xatol": tol,
                               "initial_simplex": np.array(simplex)})
    evaluations += counter["n"]
    if not result.success:
        logger.debug("Nelder-Mead stopped early: %s", result.message)

    if np.isfinite(result.fun) and result.fun < f0:
        return OptimizationResult(x=embed(result.x), fun=float(result.fun),
                                  evaluations=evaluations, grid_best=f0, simplex_used=True)
    return OptimizationResult(x=x0, fun=f0, evaluations=evaluations,
                              grid_best=f0, simplex_used=True)


def minimize_strong(family: InteractionFamily, rho_star: Optional[StateSource], T: float,
                    budget: int = 200, states: Optional[JointStateParametrization] = None,
                    tol: float = 1e-8, threads: int = 1) -> StrongMinimum:
    """Minimize the strong-coupling cost over the family and the joint-state parametrization.

    Without `states`, τ = ρ* ⊗ Gibbs(H_A, T) using the family's auxiliary Hamiltonian.
    """
    if states is None:
        if rho_star is None or family.aux_hamiltonian is None:
            raise InvalidInputError(
                "Provide a joint-state parametrization or both rho_star and the family's "
                "auxiliary Hamiltonian")
        aux_gibbs = gibbs_state(family.aux_hamiltonian, T)
        states = JointStateParametrization(target=rho_star, aux_state=lambda p: aux_gibbs,
                                           dims=family.dims)

    def objective(params) -> float:
        if not family.contains(params):
            return np.inf
        return strong_objective(family, params, states.state(params), T)

    found = nelder_mead_from_grid(objective, family.bounds, budget, tol=tol, threads=threads)
    params = dict(zip(family.names, (float(v) for v in found.x)))
    logger.info("strong-coupling minimum %.6g after %d evaluations (local, uncertified)",
                found.fun, found.evaluations)
    return StrongMinimum(params=params, tau=states.state(found.x), min_work_rate=found.fun,
                         evaluations=found.evaluations)


LEVEL = np.diag([-1.0, 1.0])


def gap_shift_hamiltonian(E: float, cal_E: float, epsilon: float) -> np.ndarray:
    """E s₁/2 + g s₁s₂/2 + 𝓔 s₂/2 with g = −ε and s = diag(−1, 1) (index 0 is the ground level)"""
    eye = np.eye(2)
    return (E / 2) * np.kron(LEVEL, eye) - (epsilon / 2) * np.kron(LEVEL, LEVEL) \
        + (cal_E / 2) * np.kron(eye, LEVEL)


def _check_gap_shift(E: float, cal_E: float, epsilon: float, T: float, T_c: float, gamma: float):
    if E <= 0 or gamma <= 0 or T <= 0 or T_c <= 0:
        raise InvalidInputError("E, gamma, T and T_c must be positive")
    if cal_E <= E:
        raise InvalidInputError(f"Auxiliary gap {cal_E} must exceed the qubit gap {E}")
    if not 0 <= epsilon < cal_E:
        raise InvalidInputError(f"Gap shift must satisfy 0 <= epsilon < {cal_E}, got {epsilon}")
    if cal_E / T < 10:
        logger.warning("Auxiliary gap is only %.2f k_B T; it is not frozen in its ground state",
                       cal_E / T)


def gap_shift_family(E: float, cal_E: float, epsilon_max: float, T_c: float, gamma: float,
                     T: float) -> Tuple[InteractionFamily, JointStateParametrization]:
    """Two-qubit family whose σ_z σ_z coupling raises the qubit gap from E to E + ε.

    The bath acts on the two lowest joint levels with detailed balance at T on
    their Bohr frequency; the target is the T_c-thermal state of the dressed qubit
    with the auxiliary in its ground state.
    """
    _check_gap_shift(E, cal_E, epsilon_max, T, T_c, gamma)

    family = InteractionFamily(
        names=("epsilon",),
        bounds=((0.0, float(epsilon_max)),),
        hamiltonian=lambda p: gap_shift_hamiltonian(E, cal_E, p[0]),
        dissipators=lambda h: (dressed_thermal_dissipator(h, 0, 1, gamma, T, label="bath"),),
        dims=(2, 2),
        aux_hamiltonian=(cal_E / 2) * LEVEL,
    )
    aux_ground = np.diag([1.0, 0.0])
    states = JointStateParametrization(
        target=lambda p: gibbs_state(np.diag([0.0, E + p[0]]), T_c),
        aux_state=lambda p: aux_ground,
        dims=(2, 2),
    )
    return family, states


def two_qubit_strong(E: float, cal_E: float, epsilon_shift: float, T: float, T_c: float,
                     gamma: float) -> float:
    """Power to hold the dressed qubit at T_c with the auxiliary frozen in |0⟩"""
    family, states = gap_shift_family(E, cal_E, epsilon_shift, T_c, gamma, T)
    params = np.array([epsilon_shift])
    return strong_objective(family, params, states.state(params), T)

"""
Dense complex linear algebra for open-system computations

Hermitian eigendecomposition (LAPACK or cyclic Jacobi), spectral matrix functions,
Kronecker products, partial traces, pivoted linear solves and Haar-random states.
All functions are pure and return fresh arrays.
"""
import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

import numpy as np
import scipy.linalg as sla

from .types import (
    ComplexMatrix,
    ConvergenceError,
    DensityMatrix,
    InvalidDensityMatrixError,
    InvalidInputError,
    NumericalError,
    RealVector,
    SingularMatrixError,
)

logger = logging.getLogger(__name__)

HERMITIAN_TOL = 1e-12
NEGATIVE_EIG_TOL = 1e-10
DEFAULT_EIG_FLOOR = 1e-14
JACOBI_MAX_SWEEPS = 60


@dataclass(frozen=True)
class HermitianSpectrum:
    """Eigenvalues (ascending) and unitary eigenvector columns of a Hermitian matrix"""
    eigenvalues: RealVector
    eigenvectors: ComplexMatrix

    def reconstruct(self) -> ComplexMatrix:
        u = self.eigenvectors
        return (u * self.eigenvalues) @ u.conj().T

    def apply(self, fn) -> ComplexMatrix:
        """f(A) = U f(Λ) U† for a scalar function applied to the eigenvalues"""
        u = self.eigenvectors
        return (u * fn(self.eigenvalues)) @ u.conj().T


@dataclass(frozen=True)
class MatrixLog:
    """Matrix logarithm with the support diagnostics callers need for divergences"""
    matrix: ComplexMatrix
    support_deficient: bool
    spectrum: HermitianSpectrum
    eig_floor: float

    @property
    def support_mask(self) -> np.ndarray:
        return self.spectrum.eigenvalues >= self.eig_floor

    @property
    def null_projector(self) -> ComplexMatrix:
        u = self.spectrum.eigenvectors[:, ~self.support_mask]
        return u @ u.conj().T


def as_matrix(a, name: str = "matrix") -> ComplexMatrix:
    """Coerce to a finite complex128 2-D array"""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise InvalidInputError(f"{name} must be two-dimensional, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InvalidInputError(f"{name} has non-finite entries")
    return m


def max_norm(a) -> float:
    a = np.asarray(a)
    return float(np.max(np.abs(a))) if a.size else 0.0


def dagger(a: ComplexMatrix) -> ComplexMatrix:
    return a.conj().T


def hermitize(a: ComplexMatrix) -> ComplexMatrix:
    return 0.5 * (a + a.conj().T)


def check_hermitian(a, tol: float = HERMITIAN_TOL, name: str = "matrix") -> ComplexMatrix:
    m = as_matrix(a, name)
    if m.shape[0] != m.shape[1]:
        raise InvalidInputError(f"{name} must be square, got shape {m.shape}")
    scale = max(1.0, max_norm(m))
    deviation = max_norm(m - m.conj().T)
    if deviation > tol * scale:
        raise InvalidInputError(
            f"{name} is not Hermitian (max |A - A†| = {deviation:.3e})")
    return hermitize(m)


def _jacobi_eigh(a: ComplexMatrix) -> Tuple[RealVector, ComplexMatrix]:
    """Cyclic Jacobi for complex Hermitian matrices.

    Each rotation first removes the phase of a[p, q], then applies the real
    symmetric Jacobi rotation. Stops when the off-diagonal Frobenius mass
    falls below 1e-14 of the total.
    """
    a = a.copy()
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    total = np.linalg.norm(a)
    if n < 2 or total == 0.0:
        return np.real(np.diag(a)).copy(), v

    for sweep in range(JACOBI_MAX_SWEEPS):
        off = np.sqrt(max(np.linalg.norm(a) ** 2 - np.sum(np.abs(np.diag(a)) ** 2), 0.0))
        if off < 1e-14 * total:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag < 1e-300:
                    continue
                phase = apq / mag
                app = a[p, p].real
                aqq = a[q, q].real
                theta = (aqq - app) / (2.0 * mag)
                t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0)) if theta != 0 else 1.0
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                # U = diag(1, conj(phase)) @ [[c, s], [-s, c]]
                u2 = np.array([[c, s], [-s * phase.conjugate(), c * phase.conjugate()]])
                cols = a[:, [p, q]] @ u2
                a[:, p], a[:, q] = cols[:, 0], cols[:, 1]
                rows = u2.conj().T @ a[[p, q], :]
                a[p, :], a[q, :] = rows[0], rows[1]
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                vcols = v[:, [p, q]] @ u2
                v[:, p], v[:, q] = vcols[:, 0], vcols[:, 1]
    else:
        off = np.sqrt(max(np.linalg.norm(a) ** 2 - np.sum(np.abs(np.diag(a)) ** 2), 0.0))
        if off > 1e-10 * total:
            raise ConvergenceError(
                f"Jacobi eigensolver left off-diagonal mass {off:.3e} after {JACOBI_MAX_SWEEPS} sweeps")
        logger.warning("Jacobi eigensolver hit %d sweeps without full convergence",
                       JACOBI_MAX_SWEEPS)

    w = np.real(np.diag(a)).copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def hermitian_eig(a, method: Optional[str] = None, tol: float = HERMITIAN_TOL) -> HermitianSpectrum:
    """Eigendecomposition of a Hermitian matrix with ascending eigenvalues.

    The input is symmetrized before decomposing; deviations from Hermiticity
    beyond `tol` (relative to max(1, ‖a‖_max)) are rejected.
    """
    m = check_hermitian(a, tol)
    if method is None:
        from ..config import get_global_config
        method = get_global_config().eig_method

    if method == "jacobi":
        w, u = _jacobi_eigh(m)
    elif method == "lapack":
        w, u = np.linalg.eigh(m)
    else:
        raise InvalidInputError(f"Unknown eigensolver method: {method}")
    return HermitianSpectrum(eigenvalues=np.asarray(w, dtype=np.float64),
                             eigenvectors=np.asarray(u, dtype=np.complex128))


def matrix_exp_hermitian(a, scale: complex = 1.0) -> ComplexMatrix:
    """exp(scale·A) for Hermitian A via its spectrum"""
    spec = hermitian_eig(a)
    return spec.apply(lambda w: np.exp(scale * w))


def _density_spectrum(rho, name: str = "rho") -> HermitianSpectrum:
    spec = hermitian_eig(rho, tol=NEGATIVE_EIG_TOL)
    lowest = spec.eigenvalues[0] if spec.eigenvalues.size else 0.0
    if lowest < -NEGATIVE_EIG_TOL:
        raise InvalidDensityMatrixError(
            f"{name} has a negative eigenvalue {lowest:.3e}")
    return spec


def matrix_ln_hermitian(rho, eig_floor: Optional[float] = None) -> MatrixLog:
    """ln ρ via the spectrum, flagging eigenvalues below `eig_floor`.

    Flagged eigenvalues are clamped to the floor in the returned matrix; callers
    use `support_deficient` / `null_projector` to decide whether the physical
    answer is +inf.
    """
    if eig_floor is None:
        from ..config import get_global_config
        eig_floor = get_global_config().eig_floor
    if eig_floor <= 0:
        raise InvalidInputError("eig_floor must be positive")

    spec = _density_spectrum(rho)
    w = spec.eigenvalues
    deficient = bool(np.any(w < eig_floor))
    log_matrix = spec.apply(lambda x: np.log(np.maximum(x, eig_floor)))
    return MatrixLog(matrix=log_matrix, support_deficient=deficient,
                     spectrum=spec, eig_floor=eig_floor)


def gibbs_state(h, T: float) -> DensityMatrix:
    """Boltzmann state e^{-H/T}/Z; T = 0 gives the (uniform) ground manifold"""
    if T < 0:
        raise InvalidInputError("Temperature must be non-negative")
    spec = hermitian_eig(h)
    e = spec.eigenvalues - spec.eigenvalues[0]
    if T == 0:
        weights = (e <= 1e-12 * max(1.0, abs(spec.eigenvalues).max())).astype(float)
    else:
        weights = np.exp(-e / T)
    weights = weights / weights.sum()
    u = spec.eigenvectors
    return hermitize((u * weights) @ u.conj().T)


def kron(a, b) -> ComplexMatrix:
    """Kronecker product; entry (i·rb+k, j·cb+l) = a[i,j]·b[k,l]"""
    return np.kron(as_matrix(a, "a"), as_matrix(b, "b"))


def _check_dims(tau: ComplexMatrix, dims: Sequence[int]) -> Tuple[int, int]:
    if len(dims) != 2:
        raise InvalidInputError("dims must be a pair (dS, dA)")
    d_s, d_a = int(dims[0]), int(dims[1])
    if tau.shape != (d_s * d_a, d_s * d_a):
        raise InvalidInputError(
            f"Joint operator has shape {tau.shape}, expected {(d_s * d_a, d_s * d_a)}")
    return d_s, d_a


def partial_trace(tau, dims: Sequence[int], keep: str = "S") -> ComplexMatrix:
    """Trace out one factor of a bipartite operator on S⊗A (S is the left factor)"""
    m = as_matrix(tau, "tau")
    d_s, d_a = _check_dims(m, dims)
    t = m.reshape(d_s, d_a, d_s, d_a)
    if keep == "S":
        return np.einsum("ikjk->ij", t)
    if keep == "A":
        return np.einsum("kikj->ij", t)
    raise InvalidInputError(f"keep must be 'S' or 'A', got {keep!r}")


def project_marginal(tau, rho_star, dims: Sequence[int]) -> ComplexMatrix:
    """Shift τ by (ρ* − Tr_A τ) ⊗ I/dA so that Tr_A τ = ρ* exactly"""
    m = as_matrix(tau, "tau")
    d_s, d_a = _check_dims(m, dims)
    defect = as_matrix(rho_star, "rho_star") - partial_trace(m, dims, "S")
    return hermitize(m + np.kron(defect, np.eye(d_a) / d_a))


def solve_linear(a, b) -> ComplexMatrix:
    """LU solve with partial pivoting, a condition estimate and a residual certificate"""
    a = as_matrix(a, "a")
    b_arr = np.asarray(b, dtype=np.complex128)
    vector_rhs = b_arr.ndim == 1
    b_mat = b_arr.reshape(-1, 1) if vector_rhs else b_arr
    n = a.shape[0]
    if a.shape != (n, n):
        raise InvalidInputError(f"Coefficient matrix must be square, got {a.shape}")
    if b_mat.shape[0] != n:
        raise InvalidInputError(f"Right-hand side has {b_mat.shape[0]} rows, expected {n}")

    anorm = np.linalg.norm(a, 1)
    if anorm == 0.0:
        raise SingularMatrixError("Coefficient matrix is zero", np.inf)

    lu, piv = sla.lu_factor(a, check_finite=False)
    gecon = sla.get_lapack_funcs("gecon", (lu,))
    rcond, info = gecon(lu, anorm, norm="1")
    if info != 0 or rcond < 10 * n * np.finfo(float).eps:
        raise SingularMatrixError("Matrix is singular to working precision",
                                  np.inf if rcond == 0 else 1.0 / rcond)

    x = sla.lu_solve((lu, piv), b_mat, check_finite=False)
    residual = max_norm(a @ x - b_mat)
    bound = 1e-10 * (max_norm(a) * max_norm(x) + max_norm(b_mat))
    if residual > bound:
        raise NumericalError(
            f"Linear solve residual {residual:.3e} exceeds certificate {bound:.3e}")
    logger.debug("solve_linear n=%d rcond=%.3e residual=%.3e", n, rcond, residual)
    return x.ravel() if vector_rhs else x


def haar_random_pure_state(dim: int, seed: Union[int, np.random.Generator, None] = None) -> DensityMatrix:
    """Projector onto a normalized vector of i.i.d. standard complex Gaussians"""
    if dim < 2:
        raise InvalidInputError("Haar sampling needs dim >= 2")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    psi = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    psi /= np.linalg.norm(psi)
    return np.outer(psi, psi.conj())


def is_density_matrix(rho, tol: float = NEGATIVE_EIG_TOL) -> bool:
    try:
        as_density_matrix(rho, tol)
    except InvalidInputError:
        return False
    return True


def as_density_matrix(rho, tol: float = NEGATIVE_EIG_TOL, name: str = "rho") -> DensityMatrix:
    """Validate Hermiticity, unit trace and positivity; returns the symmetrized matrix"""
    m = as_matrix(rho, name)
    if m.shape[0] != m.shape[1]:
        raise InvalidDensityMatrixError(f"{name} must be square, got shape {m.shape}")
    if max_norm(m - m.conj().T) > tol:
        raise InvalidDensityMatrixError(f"{name} is not Hermitian")
    m = hermitize(m)
    trace = np.trace(m).real
    if abs(trace - 1.0) > tol:
        raise InvalidDensityMatrixError(f"{name} has trace {trace:.12f}, expected 1")
    lowest = np.linalg.eigvalsh(m)[0]
    if lowest < -tol:
        raise InvalidDensityMatrixError(f"{name} has a negative eigenvalue {lowest:.3e}")
    return m

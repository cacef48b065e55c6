"""
Common types and exceptions for qcontrol-cost
"""
from typing import Optional

import numpy as np
from numpy.typing import NDArray

# Type aliases for convenience
ComplexMatrix = NDArray[np.complex128]
DensityMatrix = NDArray[np.complex128]
RealVector = NDArray[np.float64]


class QccError(Exception):
    """Base class for all qcontrol-cost errors"""


class InvalidInputError(QccError, ValueError):
    """Rejected input: bad shapes, non-Hermitian operators, violated preconditions"""


class InvalidDensityMatrixError(InvalidInputError):
    """Matrix is not a valid (Hermitian, PSD, unit-trace) density matrix"""


class ModelSpecError(InvalidInputError):
    """Schema violation in a model file; `path` points at the offending field"""

    def __init__(self, message: str, path: str = ""):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


class NumericalError(QccError, ArithmeticError):
    """A numerical procedure failed to deliver a certified answer"""


class SingularMatrixError(NumericalError):
    """Linear system is singular to working precision"""

    def __init__(self, message: str, condition_number: Optional[float] = None):
        self.condition_number = condition_number
        if condition_number is not None:
            message = f"{message} (estimated condition number {condition_number:.3e})"
        super().__init__(message)


class NonUniqueSteadyStateError(NumericalError):
    """The generator has more than one trace-one fixed point"""


class StepSizeError(NumericalError):
    """Time step too large for the propagator"""


class ConvergenceError(NumericalError):
    """Iterative procedure did not converge"""


class DivergentResultError(QccError):
    """A flagged +inf result was requested as a plain scalar"""


__all__ = [
    "ComplexMatrix",
    "DensityMatrix",
    "RealVector",
    "QccError",
    "InvalidInputError",
    "InvalidDensityMatrixError",
    "ModelSpecError",
    "NumericalError",
    "SingularMatrixError",
    "NonUniqueSteadyStateError",
    "StepSizeError",
    "ConvergenceError",
    "DivergentResultError",
]

"""
Cooling a single weakly damped qubit
"""
import numpy as np

from ..core.lindblad import OpenSystem, bose_occupation, thermal_qubit_dissipator
from ..core.types import InvalidInputError

QUBIT_COOL_MODES = ("approx", "full")


def qubit_hamiltonian(E: float) -> np.ndarray:
    """diag(0, E); index 0 is the ground level"""
    return np.diag([0.0, float(E)]).astype(np.complex128)


def thermal_qubit_system(E: float, T: float, gamma: float) -> OpenSystem:
    return OpenSystem(qubit_hamiltonian(E), (thermal_qubit_dissipator(E, T, gamma, label="bath"),))


def qubit_cool_power(E: float, T: float, T_c: float, gamma: float, mode: str = "full") -> float:
    """Minimum power to hold a qubit at T_c against a bath at T.

    approx: γ n_T E (T/T_c − 1), valid when T_c ≪ E.
    full:   γ E (T/T_c − 1)(w − z)/[(z − 1)(w + 1)], z = e^{E/T}, w = e^{E/T_c},
            evaluated in an overflow-safe form. Diverges as T_c → 0.
    """
    if mode not in QUBIT_COOL_MODES:
        raise InvalidInputError(f"mode must be one of {QUBIT_COOL_MODES}, got {mode!r}")
    if E <= 0 or T <= 0 or gamma <= 0 or T_c < 0:
        raise InvalidInputError("E, T and gamma must be positive and T_c non-negative")
    if T_c == 0:
        return np.inf
    if T_c == T:
        return 0.0

    prefactor = gamma * E * (T / T_c - 1.0)
    if mode == "approx":
        return float(prefactor * bose_occupation(E, T))
    # (w − z)/[(z − 1)(w + 1)] divided through by z·w
    a, b = E / T, E / T_c
    if a - b < 700:
        numerator = -np.exp(-a) * np.expm1(a - b)
    else:
        numerator = np.exp(-a) - np.exp(-b)
    occupation = numerator / (-np.expm1(-a) * (1.0 + np.exp(-b)))
    return float(prefactor * occupation)

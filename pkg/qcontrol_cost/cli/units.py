"""
SI ↔ natural-unit conversion for the command line

Internally ħ = k_B = 1 and every energy, temperature and rate is an angular
frequency in rad/s. On the command line and in SI model files, frequencies
are given in Hz and temperatures in kelvin.
"""
from typing import List

import numpy as np
from scipy import constants

KELVIN_TO_RAD_PER_S = constants.k / constants.hbar


def hz_to_angular(f: float) -> float:
    return 2.0 * np.pi * f


def kelvin_to_natural(T: float) -> float:
    """k_B T / ħ in rad/s"""
    return T * KELVIN_TO_RAD_PER_S


def natural_to_kelvin(T: float) -> float:
    return T / KELVIN_TO_RAD_PER_S


class UnitProvenance:
    """Collects the conversions applied to user input, for the output header"""

    def __init__(self, si: bool):
        self.si = si
        self.lines: List[str] = []

    def frequency(self, name: str, value: float) -> float:
        if not self.si:
            return value
        converted = hz_to_angular(value)
        self.lines.append(f"{name} = {value:g} Hz -> {converted:.10g} rad/s")
        return converted

    def temperature(self, name: str, value: float) -> float:
        if not self.si:
            return value
        converted = kelvin_to_natural(value)
        self.lines.append(f"{name} = {value:g} K -> {converted:.10g} rad/s")
        return converted

    def header(self) -> List[str]:
        units = "SI input (Hz, K) converted to rad/s" if self.si else "natural (hbar = k_B = 1, rad/s)"
        return [f"units: {units}"] + [f"conversion: {line}" for line in self.lines]

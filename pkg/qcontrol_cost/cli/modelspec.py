"""
Model files: JSON documents describing an open system

A model file names the Hilbert-space dimension, a Hamiltonian, a list of noise
channels (parametric or given by explicit jump operators), the reference
temperature of the controller's reservoir and an optional target state.
Complex matrices are written as separate "real"/"imag" arrays, or as a
"diagonal" list. With "units": "SI", frequencies are in Hz and temperatures
in kelvin; conversion to rad/s happens here and nowhere else.
"""
import json
from pathlib import Path
from typing import Dict, List, Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from ..core.linalg import as_density_matrix, gibbs_state
from ..core.lindblad import (
    Dissipator,
    OpenSystem,
    amplitude_damping_dissipator,
    depolarizing_dissipator,
    thermal_oscillator_dissipator,
    thermal_qubit_dissipator,
)
from ..core.types import InvalidInputError, ModelSpecError
from .units import hz_to_angular, kelvin_to_natural

DissipatorType = Literal["thermal_qubit", "thermal_oscillator", "depolarizing",
                         "amplitude_damping", "custom"]

REQUIRED_PARAMETERS: Dict[str, tuple] = {
    "thermal_qubit": ("E", "T", "gamma"),
    "thermal_oscillator": ("omega", "T", "gamma", "n_trunc"),
    "depolarizing": ("beta",),
    "amplitude_damping": ("gamma",),
}
TEMPERATURE_PARAMETERS = {"T"}
COUNT_PARAMETERS = {"n_trunc"}


class MatrixSpec(BaseModel):
    """Dense complex matrix as real/imag arrays, or a diagonal"""
    model_config = ConfigDict(extra="forbid")

    real: Optional[List[List[float]]] = None
    imag: Optional[List[List[float]]] = None
    diagonal: Optional[List[float]] = None

    @model_validator(mode="after")
    def _check_layout(self):
        if (self.real is None) == (self.diagonal is None):
            raise ValueError("give exactly one of 'real' (with optional 'imag') or 'diagonal'")
        if self.diagonal is not None and self.imag is not None:
            raise ValueError("'imag' cannot be combined with 'diagonal'")
        if self.real is not None:
            rows = len(self.real)
            if rows == 0 or any(len(row) != rows for row in self.real):
                raise ValueError("'real' must be a non-empty square array")
            if self.imag is not None and (len(self.imag) != rows
                                          or any(len(row) != rows for row in self.imag)):
                raise ValueError("'imag' must have the same shape as 'real'")
        return self

    @property
    def size(self) -> int:
        return len(self.diagonal) if self.diagonal is not None else len(self.real)

    def to_array(self) -> np.ndarray:
        if self.diagonal is not None:
            return np.diag(np.asarray(self.diagonal, dtype=float)).astype(np.complex128)
        out = np.asarray(self.real, dtype=float).astype(np.complex128)
        if self.imag is not None:
            out = out + 1j * np.asarray(self.imag, dtype=float)
        return out

    @classmethod
    def from_array(cls, a) -> "MatrixSpec":
        a = np.asarray(a, dtype=np.complex128)
        imag = a.imag.tolist() if np.any(a.imag != 0) else None
        return cls(real=a.real.tolist(), imag=imag)


class JumpSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    operator: MatrixSpec
    rate: float = Field(ge=0)


class DissipatorSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    label: str
    type: DissipatorType
    parameters: Dict[str, float] = Field(default_factory=dict)
    jumps: Optional[List[JumpSpec]] = None
    bath_temperature: Optional[float] = Field(default=None, ge=0)

    @model_validator(mode="after")
    def _check_parameters(self):
        if self.type == "custom":
            if not self.jumps:
                raise ValueError("custom dissipators need a non-empty 'jumps' list")
            return self
        if self.jumps:
            raise ValueError(f"'{self.type}' dissipators are parametric; remove 'jumps'")
        missing = [p for p in REQUIRED_PARAMETERS[self.type] if p not in self.parameters]
        if missing:
            raise ValueError(f"missing parameters for '{self.type}': {', '.join(missing)}")
        extra = sorted(set(self.parameters) - set(REQUIRED_PARAMETERS[self.type]))
        if extra:
            raise ValueError(f"unknown parameters for '{self.type}': {', '.join(extra)}")
        return self


class GibbsTarget(BaseModel):
    model_config = ConfigDict(extra="forbid")

    gibbs: float = Field(ge=0)


class ModelSpecFile(BaseModel):
    """Validated contents of a model file"""
    model_config = ConfigDict(extra="forbid")

    name: str = "model"
    description: str = ""
    units: Literal["natural", "SI"] = "natural"
    dim: int = Field(ge=1)
    hamiltonian: MatrixSpec
    dissipators: List[DissipatorSpec] = Field(default_factory=list)
    reference_temperature: float = Field(gt=0)
    target_state: Optional[Union[GibbsTarget, MatrixSpec]] = None


def _format_location(loc) -> str:
    return ".".join(str(part) for part in loc) or "$"


def parse_model_data(data: dict) -> ModelSpecFile:
    try:
        spec = ModelSpecFile.model_validate(data)
    except ValidationError as exc:
        first = exc.errors()[0]
        raise ModelSpecError(first["msg"], _format_location(first["loc"])) from exc
    _check_dimensions(spec)
    return spec


def parse_model_text(text: str) -> ModelSpecFile:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelSpecError(f"invalid JSON ({exc.msg} at line {exc.lineno})", "$") from exc
    if not isinstance(data, dict):
        raise ModelSpecError("model file must contain a JSON object", "$")
    return parse_model_data(data)


def load_model_spec(path: Union[str, Path]) -> ModelSpecFile:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InvalidInputError(f"Cannot read model file {path}: {exc.strerror}") from exc
    return parse_model_text(text)


def dump_model_spec(spec: ModelSpecFile) -> str:
    """Serialize back to JSON; parse(dump(spec)) == spec"""
    return spec.model_dump_json(indent=2, exclude_none=True)


def _check_dimensions(spec: ModelSpecFile) -> None:
    if spec.hamiltonian.size != spec.dim:
        raise ModelSpecError(f"expected a {spec.dim}x{spec.dim} matrix", "hamiltonian")
    for i, d in enumerate(spec.dissipators):
        if d.type in ("thermal_qubit", "depolarizing", "amplitude_damping") and spec.dim != 2:
            raise ModelSpecError(f"'{d.type}' needs dim = 2, model has {spec.dim}",
                                 f"dissipators.{i}.type")
        if d.type == "thermal_oscillator" and int(d.parameters["n_trunc"]) != spec.dim:
            raise ModelSpecError(f"n_trunc must equal dim = {spec.dim}",
                                 f"dissipators.{i}.parameters.n_trunc")
        for j, jump in enumerate(d.jumps or []):
            if jump.operator.size != spec.dim:
                raise ModelSpecError(f"expected a {spec.dim}x{spec.dim} matrix",
                                     f"dissipators.{i}.jumps.{j}.operator")
    if isinstance(spec.target_state, MatrixSpec) and spec.target_state.size != spec.dim:
        raise ModelSpecError(f"expected a {spec.dim}x{spec.dim} matrix", "target_state")


class _Converter:
    def __init__(self, si: bool):
        self.si = si

    def frequency(self, value: float) -> float:
        return hz_to_angular(value) if self.si else value

    def temperature(self, value: float) -> float:
        return kelvin_to_natural(value) if self.si else value

    def matrix(self, m: MatrixSpec) -> np.ndarray:
        return hz_to_angular(m.to_array()) if self.si else m.to_array()

    def parameter(self, key: str, value: float):
        if key in COUNT_PARAMETERS:
            return int(value)
        if key in TEMPERATURE_PARAMETERS:
            return self.temperature(value)
        return self.frequency(value)


def _build_dissipator(d: DissipatorSpec, conv: _Converter, path: str) -> Dissipator:
    p = {k: conv.parameter(k, v) for k, v in d.parameters.items()}
    try:
        if d.type == "thermal_qubit":
            return thermal_qubit_dissipator(p["E"], p["T"], p["gamma"], label=d.label)
        if d.type == "thermal_oscillator":
            return thermal_oscillator_dissipator(p["omega"], p["T"], p["gamma"], p["n_trunc"],
                                                 label=d.label)
        if d.type == "depolarizing":
            return depolarizing_dissipator(p["beta"], label=d.label)
        if d.type == "amplitude_damping":
            return amplitude_damping_dissipator(p["gamma"], label=d.label)
        bath_t = conv.temperature(d.bath_temperature) if d.bath_temperature is not None else None
        return Dissipator(
            jumps=tuple((j.operator.to_array(), conv.frequency(j.rate)) for j in d.jumps),
            label=d.label,
            bath_temperature=bath_t,
        )
    except InvalidInputError as exc:
        raise ModelSpecError(str(exc), path) from exc


def build_system(spec: ModelSpecFile) -> OpenSystem:
    """OpenSystem in rad/s"""
    conv = _Converter(spec.units == "SI")
    dissipators = tuple(_build_dissipator(d, conv, f"dissipators.{i}")
                        for i, d in enumerate(spec.dissipators))
    try:
        return OpenSystem(conv.matrix(spec.hamiltonian), dissipators)
    except InvalidInputError as exc:
        raise ModelSpecError(str(exc), "hamiltonian") from exc


def reference_temperature(spec: ModelSpecFile) -> float:
    return _Converter(spec.units == "SI").temperature(spec.reference_temperature)


def build_target(spec: ModelSpecFile, override: Optional[str] = None) -> Optional[np.ndarray]:
    """Target state from the file, or from a command-line override.

    Overrides: "spec" (the file's target), "gibbs:<T_c>" (in the file's units),
    "ground" (ground-state projector, a pure target) or "mixed" (I/d).
    """
    conv = _Converter(spec.units == "SI")
    h = conv.matrix(spec.hamiltonian)
    choice = override or "spec"
    if choice == "spec":
        target = spec.target_state
        if target is None:
            return None
        if isinstance(target, GibbsTarget):
            return gibbs_state(h, conv.temperature(target.gibbs))
        try:
            return as_density_matrix(target.to_array(), name="target_state")
        except InvalidInputError as exc:
            raise ModelSpecError(str(exc), "target_state") from exc
    if choice.startswith("gibbs:"):
        try:
            T_c = float(choice.split(":", 1)[1])
        except ValueError as exc:
            raise InvalidInputError(f"Cannot parse target '{choice}'") from exc
        if T_c < 0:
            raise InvalidInputError("Target temperature must be non-negative")
        return gibbs_state(h, conv.temperature(T_c))
    if choice == "ground":
        return gibbs_state(h, 0.0)
    if choice == "mixed":
        return np.eye(spec.dim, dtype=np.complex128) / spec.dim
    raise InvalidInputError(
        f"Unknown target '{choice}'; use spec, gibbs:<T>, ground or mixed")

"""
qcontrol-cost - The work cost of holding open quantum systems out of equilibrium

A noisy quantum system relaxes toward a steady state fixed by its
environment. Keeping it anywhere else (colder, purer, or in a computational
state) costs work. This package computes the minimum work rate a
controller needs, channel by channel, from a Lindblad description of the
noise, and applies it to worked models: qubit cooling, resolved-sideband
cooling of a mechanical oscillator, cooling with a strongly coupled
auxiliary qubit, and the free-energy cost of gate noise in a quantum
computer.

Units: ħ = k_B = 1 throughout; energies, temperatures and rates are angular
frequencies in rad/s. SI input (Hz, kelvin) is converted at the command line
and in model files.

## Quick Start

### Library Usage
```python
import numpy as np
from qcontrol_cost import ControlCostSession, min_power
from qcontrol_cost.core import gibbs_state

# From a bundled model file
session = ControlCostSession.from_example("thermal_qubit")
rho_ss = session.steady_state()
report = session.min_work_rate(gibbs_state(session.system.hamiltonian, 0.5))
print(report.min_work_rate)
print(report.to_frame())

# Or one-off
from qcontrol_cost.models import thermal_qubit_system
system = thermal_qubit_system(E=1.0, T=1.0, gamma=0.1)
print(min_power(system, gibbs_state(system.hamiltonian, 0.5), T=1.0))
```

### CLI Usage
```bash
# Set up a working directory with example models and a .env template
qcc-init

# Steady state and control cost of a model
qcc steady models/thermal_qubit.json
qcc cost models/thermal_qubit.json --target gibbs:0.5

# Worked models
qcc qubit-cool --E 1 --T 1 --Tc 0.5 --gamma 0.1
qcc sideband --teufel --sweep g:1e3:1e7:40:log --format csv
qcc qc-cost --gamma 2 --beta 1 --tau 1e-6 --E 50 --T 1 --M 1000
```

## Installation & Testing

```bash
pip install qcontrol-cost[full]

# Quick self-check
python -c "from qcontrol_cost.tests import run_installation_tests; run_installation_tests()"

# Full test suite
pytest
```

## Package Contents

- **qcontrol_cost.core**: linear algebra, Lindblad dynamics, thermodynamic accounting, strong coupling
- **qcontrol_cost.models**: qubit, sideband and quantum-computer models
- **qcontrol_cost.cli**: the `qcc` command line and model files
- **qcontrol_cost.config**: configuration and project setup
- **qcontrol_cost.examples**: bundled model files
- **qcontrol_cost.tests**: installation self-check and test suite
"""

# Package metadata (defined before submodule imports; cli.output reads it)
__version__ = "0.1.0"
__description__ = "Minimum work rate for holding open quantum systems in non-equilibrium states"

from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

from .config import ProjectInitializer, QccConfig, get_global_config, load_config
from .core.lindblad import OpenSystem, steady_state
from .core.thermo import ControlCostReport, ProtocolCheck, min_work_rate, protocol_step_check
from .core.types import DensityMatrix


class ControlCostSession:
    """
    Library interface around one open system.

    Holds the system, a reference temperature and the configuration, and
    records every computation in a history list.

    ## Example Usage

    ```python
    from qcontrol_cost import ControlCostSession

    session = ControlCostSession.from_model_file("models/two_bath_qubit.json")
    report = session.min_work_rate(session.target)
    check = session.protocol_check(session.target)
    for entry in session.get_history():
        print(entry["type"], entry["result"])
    ```
    """

    def __init__(
        self,
        system: OpenSystem,
        reference_temperature: float,
        target: Optional[DensityMatrix] = None,
        config: Optional[QccConfig] = None,
        name: str = "model",
    ):
        """
        Args:
            system: Hamiltonian and noise channels, in rad/s
            reference_temperature: Temperature of the controller's reservoir
            target: Default target state for cost computations
            config: Optional configuration override
            name: Label used in the history
        """
        self.system = system
        self.reference_temperature = reference_temperature
        self.target = target
        self.config = config or get_global_config()
        self.name = name
        self._history: List[Dict[str, Any]] = []

    @classmethod
    def from_model_file(cls, path: Union[str, Path], config: Optional[QccConfig] = None) -> "ControlCostSession":
        """Build a session from a JSON model file (units converted to rad/s)"""
        from .cli.modelspec import build_system, build_target, load_model_spec, reference_temperature

        spec = load_model_spec(path)
        return cls(build_system(spec), reference_temperature(spec), build_target(spec),
                   config=config, name=spec.name)

    @classmethod
    def from_example(cls, name: str, config: Optional[QccConfig] = None) -> "ControlCostSession":
        """Build a session from a bundled model"""
        from .cli.modelspec import build_system, build_target, reference_temperature
        from .examples import load_example

        spec = load_example(name)
        return cls(build_system(spec), reference_temperature(spec), build_target(spec),
                   config=config, name=spec.name)

    def steady_state(self) -> DensityMatrix:
        rho = steady_state(self.system)
        self._record("steady_state", None, rho)
        return rho

    def min_work_rate(self, target: Optional[DensityMatrix] = None,
                      T: Optional[float] = None) -> ControlCostReport:
        """
        Minimum work rate to hold `target` (default: the session's target).

        Returns the per-channel report; `report.scalar()` raises for a
        support-deficient target instead of returning +inf.
        """
        target = self._target(target)
        report = min_work_rate(self.system, target, T if T is not None else self.reference_temperature,
                               eig_floor=self.config.eig_floor)
        self._record("min_work_rate", target, report.min_work_rate)
        return report

    def protocol_check(self, target: Optional[DensityMatrix] = None,
                       dts: Optional[Sequence[float]] = None) -> ProtocolCheck:
        target = self._target(target)
        check = protocol_step_check(self.system, target, self.reference_temperature, dts)
        self._record("protocol_check", target, check.limit)
        return check

    def get_history(self) -> List[Dict[str, Any]]:
        return self._history.copy()

    def clear_history(self) -> None:
        self._history.clear()

    def initialize_project(self, project_root: str = ".", force: bool = False) -> Dict[str, Any]:
        """Set up models/, results/ and a .env template in `project_root`"""
        return ProjectInitializer(project_root).initialize_project(force=force)

    def _target(self, target: Optional[DensityMatrix]) -> DensityMatrix:
        if target is not None:
            return target
        if self.target is None:
            raise ValueError("No target state given and the session has none")
        return self.target

    def _record(self, kind: str, target, result) -> None:
        self._history.append({
            "type": kind,
            "target": target,
            "result": result,
            "timestamp": datetime.now().isoformat(),
        })

    def __repr__(self) -> str:
        return f"ControlCostSession(name='{self.name}', dim={self.system.dim})"


# Convenience functions for quick usage
def min_power(system: OpenSystem, target: DensityMatrix, T: float) -> float:
    """
    Minimum work rate to hold `target` against the noise of `system`.

    Example:
        ```python
        from qcontrol_cost import min_power
        from qcontrol_cost.models import thermal_qubit_system
        from qcontrol_cost.core import gibbs_state

        system = thermal_qubit_system(1.0, 1.0, 0.1)
        print(min_power(system, gibbs_state(system.hamiltonian, 0.5), 1.0))
        ```
    """
    return min_work_rate(system, target, T).min_work_rate


def steady_state_of(system: OpenSystem) -> DensityMatrix:
    """Unique steady state of `system`"""
    return steady_state(system)


__all__ = [
    # Main class
    "ControlCostSession",

    # Convenience functions
    "min_power",
    "steady_state_of",

    # Configuration
    "QccConfig",
    "load_config",
    "ProjectInitializer",

    # Package metadata
    "__version__",
    "__description__",
]

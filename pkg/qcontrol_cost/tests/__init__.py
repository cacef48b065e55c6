"""
qcontrol-cost Installation Tests

Quick checks that an installed qcontrol-cost works. The full test suite runs
with pytest; these functions need nothing beyond the package itself:

```python
from qcontrol_cost.tests import run_installation_tests

run_installation_tests()
```
"""

import tempfile
import traceback
from pathlib import Path
from typing import Any, Dict, List


def test_basic_imports() -> Dict[str, Any]:
    """Test that all basic imports work"""
    result = {"test": "basic_imports", "passed": False, "error": None}

    try:
        from qcontrol_cost import ControlCostSession, min_power, steady_state_of  # noqa: F401
        from qcontrol_cost.config import QccConfig, load_config  # noqa: F401
        from qcontrol_cost.core import OpenSystem, min_work_rate, steady_state  # noqa: F401
        from qcontrol_cost.models import qubit_cool_power, sideband_steady_state  # noqa: F401

        result["passed"] = True
        result["message"] = "All basic imports successful"

    except Exception as e:
        result["error"] = str(e)
        result["message"] = f"Import failed: {e}"

    return result


def test_equilibrium_cost() -> Dict[str, Any]:
    """Holding a qubit at its bath temperature costs nothing"""
    result = {"test": "equilibrium_cost", "passed": False, "error": None}

    try:
        from qcontrol_cost import min_power
        from qcontrol_cost.core import gibbs_state
        from qcontrol_cost.models import thermal_qubit_system

        system = thermal_qubit_system(1.0, 1.0, 0.1)
        value = min_power(system, gibbs_state(system.hamiltonian, 1.0), 1.0)
        assert abs(value) < 1e-11, f"equilibrium cost {value}"

        result["passed"] = True
        result["message"] = "Equilibrium cost is zero"

    except Exception as e:
        result["error"] = str(e)
        result["message"] = f"Equilibrium check failed: {e}"

    return result


def test_closed_form_cooling() -> Dict[str, Any]:
    """The generic minimum work rate reproduces the closed-form qubit cooling power"""
    result = {"test": "closed_form_cooling", "passed": False, "error": None}

    try:
        from qcontrol_cost import min_power
        from qcontrol_cost.core import gibbs_state
        from qcontrol_cost.models import qubit_cool_power, thermal_qubit_system

        system = thermal_qubit_system(1.0, 1.0, 0.1)
        generic = min_power(system, gibbs_state(system.hamiltonian, 0.5), 1.0)
        closed = qubit_cool_power(1.0, 1.0, 0.5, 0.1)
        assert abs(generic - closed) <= 1e-10 * abs(closed), f"{generic} != {closed}"

        result["passed"] = True
        result["message"] = f"Qubit cooling power {closed:.6g} matches"

    except Exception as e:
        result["error"] = str(e)
        result["message"] = f"Closed-form check failed: {e}"

    return result


def test_bundled_examples() -> Dict[str, Any]:
    """Every bundled model file parses and builds"""
    result = {"test": "bundled_examples", "passed": False, "error": None}

    try:
        from qcontrol_cost.cli.modelspec import build_system
        from qcontrol_cost.examples import list_examples, load_example

        names = list_examples()
        assert names, "no bundled examples found"
        for name in names:
            build_system(load_example(name))

        result["passed"] = True
        result["message"] = f"{len(names)} example models load"

    except Exception as e:
        result["error"] = str(e)
        result["message"] = f"Example loading failed: {e}"

    return result


def test_project_initialization() -> Dict[str, Any]:
    """Test that project initialization works"""
    result = {"test": "project_initialization", "passed": False, "error": None}

    try:
        from qcontrol_cost.config import ProjectInitializer

        with tempfile.TemporaryDirectory() as temp_dir:
            outcome = ProjectInitializer(temp_dir).initialize_project()
            assert outcome["success"], outcome["errors"]
            assert (Path(temp_dir) / "models" / "thermal_qubit.json").exists()
            assert (Path(temp_dir) / ".env").exists()

        result["passed"] = True
        result["message"] = "Project initialization successful"

    except Exception as e:
        result["error"] = str(e)
        result["message"] = f"Project initialization failed: {e}"

    return result


def run_installation_tests(verbose: bool = True) -> List[Dict[str, Any]]:
    """
    Run all installation tests and report results

    Args:
        verbose: Print results as they run

    Returns:
        List of result dictionaries
    """
    checks = [
        test_basic_imports,
        test_equilibrium_cost,
        test_closed_form_cooling,
        test_bundled_examples,
        test_project_initialization,
    ]
    results = []
    if verbose:
        print("🧪 Running qcontrol-cost installation tests...\n")

    for check in checks:
        try:
            outcome = check()
        except Exception as e:
            outcome = {"test": check.__name__, "passed": False, "error": str(e),
                       "message": traceback.format_exc()}
        results.append(outcome)
        if verbose:
            icon = "✅" if outcome["passed"] else "❌"
            print(f"{icon} {outcome['test']}: {outcome.get('message', '')}")

    if verbose:
        passed = sum(1 for r in results if r["passed"])
        print(f"\n📊 {passed}/{len(results)} tests passed")
        if passed == len(results):
            print("🎉 qcontrol-cost is ready to use!")

    return results


__all__ = ["run_installation_tests"]

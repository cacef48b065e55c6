import numpy as np
import pytest

from qcontrol_cost import ControlCostSession, __version__, min_power, steady_state_of
from qcontrol_cost.config import QccConfig
from qcontrol_cost.core import gibbs_state
from qcontrol_cost.examples import get_example_model
from qcontrol_cost.models import qubit_cool_power, thermal_qubit_system
from qcontrol_cost.tests import run_installation_tests


def test_session_from_example_records_history():
    session = ControlCostSession.from_example("thermal_qubit")
    assert session.name == "thermal_qubit"
    assert session.reference_temperature == 1.0

    rho = session.steady_state()
    np.testing.assert_allclose(rho, gibbs_state(session.system.hamiltonian, 1.0), atol=1e-10)
    report = session.min_work_rate()
    assert report.scalar() == pytest.approx(qubit_cool_power(1.0, 1.0, 0.5, 0.1), rel=1e-10)

    history = session.get_history()
    assert [entry["type"] for entry in history] == ["steady_state", "min_work_rate"]
    assert "timestamp" in history[0]
    session.clear_history()
    assert session.get_history() == []


def test_session_from_model_file_and_overrides():
    session = ControlCostSession.from_model_file(get_example_model("two_bath_qubit"),
                                                 config=QccConfig(eig_floor=1e-13))
    assert session.config.eig_floor == 1e-13
    hotter = session.min_work_rate(np.eye(2) / 2, T=2.0)
    assert hotter.reference_temperature == 2.0
    check = session.protocol_check()
    assert check.converged
    assert session.get_history()[-1]["type"] == "protocol_check"


def test_session_without_target():
    system = thermal_qubit_system(1.0, 1.0, 0.1)
    session = ControlCostSession(system, 1.0)
    with pytest.raises(ValueError):
        session.min_work_rate()
    assert "dim=2" in repr(session)


def test_session_initializes_projects(tmp_path):
    session = ControlCostSession.from_example("thermal_qubit")
    result = session.initialize_project(str(tmp_path))
    assert result["success"]
    assert (tmp_path / "models").is_dir()


def test_convenience_functions():
    system = thermal_qubit_system(1.0, 1.0, 0.1)
    assert min_power(system, gibbs_state(system.hamiltonian, 0.5), 1.0) == pytest.approx(
        qubit_cool_power(1.0, 1.0, 0.5, 0.1), rel=1e-10)
    np.testing.assert_allclose(steady_state_of(system), gibbs_state(system.hamiltonian, 1.0),
                               atol=1e-10)
    assert __version__ == "0.1.0"


def test_installation_checks_pass(capsys):
    results = run_installation_tests(verbose=False)
    assert all(r["passed"] for r in results), [r["error"] for r in results if not r["passed"]]

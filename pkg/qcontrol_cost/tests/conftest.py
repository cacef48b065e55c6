import logging

import numpy as np
import pytest

from qcontrol_cost.config import set_global_config


@pytest.fixture(autouse=True)
def fresh_config(monkeypatch, tmp_path):
    """Each test sees default settings: no QCC_ variables and no stray .env"""
    for name in ("THREADS", "EIG_METHOD", "EIG_FLOOR", "OUTPUT_DIR", "VERBOSE", "DEBUG",
                 "COLORIZE", "LOG_LEVEL"):
        monkeypatch.delenv(f"QCC_{name}", raising=False)
    monkeypatch.chdir(tmp_path)
    set_global_config(None)
    yield
    set_global_config(None)
    # the CLI installs its own handler; hand records back to pytest
    package_logger = logging.getLogger("qcontrol_cost")
    package_logger.handlers.clear()
    package_logger.propagate = True
    package_logger.setLevel(logging.NOTSET)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_hermitian(rng, n: int, scale: float = 1.0) -> np.ndarray:
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return scale * 0.5 * (g + g.conj().T)


def random_density(rng, n: int, min_weight: float = 0.0) -> np.ndarray:
    """Random full-rank state, mixed with I/n so every eigenvalue is at least min_weight"""
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    rho = g @ g.conj().T
    rho /= np.trace(rho).real
    mix = min_weight * n
    return (1 - mix) * rho + mix * np.eye(n) / n

"""
Fixtures compartidas de la suite.
"""
import sys
from pathlib import Path

import numpy as np
import pytest

ROOT = Path(__file__).resolve().parents[1]
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from src.problems import PauliHamiltonian  # noqa: E402


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="ejecutar entrenamientos largos")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="usar --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def two_qubit_zz():
    """H = Z0 Z1 + 0.5 X0, E_min = -sqrt(1.25)."""
    return PauliHamiltonian(2, [(1.0, "ZZ"), (0.5, "XI")], name="zz")


def synthetic_hamiltonian(n_qubits: int, seed: int = 0) -> PauliHamiltonian:
    """Hamiltoniano aleatorio con términos Z, ZZ y X de n qubits."""
    generator = np.random.default_rng(seed)
    terms = []
    for q in range(n_qubits):
        label = ["I"] * n_qubits
        label[q] = "Z"
        terms.append((float(generator.normal()), "".join(label)))
        label[q] = "X"
        terms.append((float(generator.normal()) * 0.5, "".join(label)))
    for q in range(n_qubits - 1):
        label = ["I"] * n_qubits
        label[q] = label[q + 1] = "Z"
        terms.append((float(generator.normal()), "".join(label)))
    return PauliHamiltonian(n_qubits, terms, name=f"synthetic_{n_qubits}q")


@pytest.fixture
def failing_cobyla(monkeypatch):
    """scipy COBYLA lanza ValueError; Nelder-Mead sigue disponible."""
    from scipy import optimize as sp_optimize

    real_minimize = sp_optimize.minimize

    def minimize(fun, x0, method=None, **kwargs):
        if method == "COBYLA":
            raise ValueError("COBYLA no disponible")
        return real_minimize(fun, x0, method=method, **kwargs)

    monkeypatch.setattr(sp_optimize, "minimize", minimize)

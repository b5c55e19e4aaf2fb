"""
Canal despolarizante y configuración de ruido.
"""
import itertools
from dataclasses import asdict, dataclass
from functools import lru_cache
from typing import Dict, List, Sequence

import numpy as np

from ..utils.errors import ConfigurationError
from .gates import PAULI_MATRICES
from .states import DensityMatrix, apply_unitary_density, check_qubits

# Preset ruidoso: 0.1% en compuertas de un qubit y 0.01% en CX
NOISY_P1 = 0.001
NOISY_P2 = 0.0001


def _check_probability(name: str, value: float):
    if not 0.0 <= value <= 1.0:
        raise ConfigurationError(f"{name} debe estar en [0, 1], recibió {value}")


@dataclass(frozen=True)
class NoiseConfig:
    """Probabilidades de despolarización aplicadas después de cada compuerta."""

    p1: float = 0.0
    p2: float = 0.0
    enabled: bool = False

    def __post_init__(self):
        _check_probability("p1", self.p1)
        _check_probability("p2", self.p2)

    @classmethod
    def noiseless(cls) -> "NoiseConfig":
        return cls(0.0, 0.0, False)

    @classmethod
    def noisy_preset(cls) -> "NoiseConfig":
        """Preset ruidoso (p1 = 0.001, p2 = 0.0001)."""
        return cls(NOISY_P1, NOISY_P2, True)

    def probability_for(self, n_gate_qubits: int) -> float:
        """Probabilidad asociada a una compuerta de 1 o 2 qubits."""
        return self.p1 if n_gate_qubits == 1 else self.p2

    def to_dict(self) -> Dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict) -> "NoiseConfig":
        unknown = set(data) - {"p1", "p2", "enabled"}
        if unknown:
            raise ConfigurationError(f"Claves de ruido desconocidas: {sorted(unknown)}")
        return cls(
            float(data.get("p1", 0.0)),
            float(data.get("p2", 0.0)),
            bool(data.get("enabled", False)),
        )


@lru_cache(maxsize=4)
def non_identity_paulis(k: int) -> List[np.ndarray]:
    """
    Productos de Pauli de k qubits distintos de la identidad (4^k - 1 matrices).

    Args:
        k: Número de qubits

    Returns:
        Lista de matrices 2^k x 2^k
    """
    operators = []
    for labels in itertools.product("IXYZ", repeat=k):
        if all(label == "I" for label in labels):
            continue
        matrix = np.array([[1.0]], dtype=complex)
        for label in labels:
            matrix = np.kron(matrix, PAULI_MATRICES[label])
        operators.append(matrix)
    return operators


def depolarize_array(
    rho: np.ndarray, qubits: Sequence[int], p: float, n_qubits: int
) -> np.ndarray:
    """
    Canal despolarizante sobre un array de matriz densidad (admite batch).

    ρ ← (1 - p) ρ + p / (4^k - 1) Σ_{P ≠ I} P ρ P†
    """
    if p == 0.0:
        return rho
    paulis = non_identity_paulis(len(qubits))
    mixed = np.zeros_like(rho)
    for pauli in paulis:
        mixed += apply_unitary_density(rho, pauli, qubits, n_qubits)
    return (1.0 - p) * rho + (p / len(paulis)) * mixed


def apply_depolarizing(state: DensityMatrix, qubits: Sequence[int], p: float) -> DensityMatrix:
    """
    Aplica el canal despolarizante uniforme sobre los qubits indicados.

    Args:
        state: Matriz densidad válida
        qubits: Uno o dos índices de qubit
        p: Probabilidad de despolarización

    Returns:
        Nueva matriz densidad
    """
    _check_probability("p", p)
    if len(qubits) not in (1, 2):
        raise ConfigurationError(f"El canal actúa sobre 1 o 2 qubits, recibió {list(qubits)}")
    check_qubits(qubits, state.n_qubits)
    return DensityMatrix(
        state.n_qubits, depolarize_array(state.matrix, list(qubits), p, state.n_qubits)
    )

"""
Dataset sintético de clasificación binaria para el clasificador variacional.
"""
import math
from dataclasses import dataclass
from typing import Dict, Tuple

import numpy as np

from ..qsim.circuit import CircuitProgram
from ..qsim.gates import Gate, GateKind
from ..utils.errors import ConfigurationError

CIRCLE_CENTER = (0.5, 0.5)
CIRCLE_RADIUS_SQ = 0.15
VQC_QUBITS = 3


def label_for(x: np.ndarray) -> int:
    """
    Regla del círculo: 1 si (x1-0.5)² + (x2-0.5)² > 0.15.

    Args:
        x: Punto en [0,1]²

    Returns:
        Etiqueta 0 o 1
    """
    dx = float(x[0]) - CIRCLE_CENTER[0]
    dy = float(x[1]) - CIRCLE_CENTER[1]
    return int(dx * dx + dy * dy > CIRCLE_RADIUS_SQ)


def _labels(points: np.ndarray) -> np.ndarray:
    d = (points - np.asarray(CIRCLE_CENTER)) ** 2
    return (d.sum(axis=1) > CIRCLE_RADIUS_SQ).astype(np.int64)


@dataclass
class ClassificationDataset:
    """Conjuntos de entrenamiento y prueba con etiquetas binarias."""

    train_x: np.ndarray
    train_y: np.ndarray
    test_x: np.ndarray
    test_y: np.ndarray
    seed: int

    def split(self, name: str) -> Tuple[np.ndarray, np.ndarray]:
        """
        Devuelve (x, y) de un split.

        Args:
            name: "train" o "test"
        """
        if name == "train":
            return self.train_x, self.train_y
        if name == "test":
            return self.test_x, self.test_y
        raise ConfigurationError(f"Split desconocido: {name}")

    def to_dict(self) -> Dict:
        return {
            "seed": self.seed,
            "n_train": int(len(self.train_y)),
            "n_test": int(len(self.test_y)),
        }


def _sample_balanced(rng: np.random.Generator, n: int) -> Tuple[np.ndarray, np.ndarray]:
    """Muestrea puntos uniformes aceptándolos por cuota de clase (n//2 de la clase 0)."""
    quotas = {0: n // 2, 1: n - n // 2}
    accepted = {0: [], 1: []}
    while len(accepted[0]) < quotas[0] or len(accepted[1]) < quotas[1]:
        candidates = rng.uniform(0.0, 1.0, size=(4 * n, 2))
        for point, label in zip(candidates, _labels(candidates)):
            if len(accepted[label]) < quotas[label]:
                accepted[label].append(point)
    points = np.array(accepted[0] + accepted[1])
    labels = np.array([0] * quotas[0] + [1] * quotas[1], dtype=np.int64)
    order = rng.permutation(n)
    return points[order], labels[order]


def generate_vqc_dataset(seed: int, n_train: int = 200, n_test: int = 100) -> ClassificationDataset:
    """
    Genera el dataset del círculo de forma determinista.

    Args:
        seed: Semilla
        n_train: Muestras de entrenamiento (≥ 10)
        n_test: Muestras de prueba (≥ 10)

    Returns:
        Dataset balanceado (50% por clase en cada split)
    """
    if n_train < 10 or n_test < 10:
        raise ConfigurationError(f"Se requieren al menos 10 muestras por split: {n_train}, {n_test}")
    rng = np.random.default_rng(seed)
    train_x, train_y = _sample_balanced(rng, n_train)
    test_x, test_y = _sample_balanced(rng, n_test)
    return ClassificationDataset(train_x, train_y, test_x, test_y, seed)


def encode_features(x, n_qubits: int = VQC_QUBITS) -> CircuitProgram:
    """
    Prefijo de codificación [RY(x1·π) en q0, RY(x2·π) en q1].

    Args:
        x: Punto en [0,1]²
        n_qubits: Qubits del registro; los qubits ≥ 2 no se codifican

    Returns:
        CircuitProgram con las dos rotaciones
    """
    return CircuitProgram(
        n_qubits,
        [
            Gate(GateKind.RY, (0,), float(x[0]) * math.pi),
            Gate(GateKind.RY, (1,), float(x[1]) * math.pi),
        ],
    )


def encoded_states(points: np.ndarray, n_qubits: int = VQC_QUBITS) -> np.ndarray:
    """
    Vectores de estado tras el prefijo de codificación, para un batch de puntos.

    RY(θ)|0> = cos(θ/2)|0> + sin(θ/2)|1>, así que el estado es un producto
    cerrado; equivale a simular encode_features(x) desde |0...0>.

    Args:
        points: Array (B, 2)

    Returns:
        Array (B, 2^n) de amplitudes
    """
    half = np.asarray(points, dtype=float) * math.pi / 2.0
    q0 = np.stack([np.cos(half[:, 0]), np.sin(half[:, 0])], axis=1)
    q1 = np.stack([np.cos(half[:, 1]), np.sin(half[:, 1])], axis=1)
    state = np.einsum("bi,bj->bij", q0, q1).reshape(len(points), 4)
    rest = 2 ** (n_qubits - 2)
    out = np.zeros((len(points), 4, rest), dtype=complex)
    out[:, :, 0] = state
    return out.reshape(len(points), 4 * rest)

"""
Definición de compuertas cuánticas y sus matrices.

Convenciones:
    RX(θ) = exp(-iθX/2), RY(θ) = exp(-iθY/2), RZ(θ) = exp(-iθZ/2)
    T = diag(1, e^{iπ/4})
    CX actúa sobre (control, target) con el control como eje más significativo.
"""
import enum
import math
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np

from ..utils.errors import ConfigurationError


class GateKind(str, enum.Enum):
    """Tipos de compuerta soportados."""

    RX = "RX"
    RY = "RY"
    RZ = "RZ"
    CX = "CX"
    X = "X"
    Y = "Y"
    Z = "Z"
    H = "H"
    T = "T"

    @property
    def is_rotation(self) -> bool:
        """Compuertas con parámetro continuo."""
        return self in ROTATION_KINDS

    @property
    def n_qubits(self) -> int:
        """Número de qubits sobre los que actúa."""
        return 2 if self is GateKind.CX else 1


ROTATION_KINDS = (GateKind.RX, GateKind.RY, GateKind.RZ)
FIXED_KINDS = (GateKind.X, GateKind.Y, GateKind.Z, GateKind.H, GateKind.T)

PAULI_MATRICES: Dict[str, np.ndarray] = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

_FIXED_MATRICES: Dict[GateKind, np.ndarray] = {
    GateKind.X: PAULI_MATRICES["X"],
    GateKind.Y: PAULI_MATRICES["Y"],
    GateKind.Z: PAULI_MATRICES["Z"],
    GateKind.H: np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2.0),
    GateKind.T: np.array([[1, 0], [0, np.exp(1j * math.pi / 4)]], dtype=complex),
    GateKind.CX: np.array(
        [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
    ),
}


@dataclass(frozen=True)
class Gate:
    """Compuerta colocada sobre uno o dos qubits."""

    kind: GateKind
    qubits: Tuple[int, ...]
    angle: Optional[float] = field(default=None)

    def __post_init__(self):
        kind = GateKind(self.kind)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))

        if len(self.qubits) != kind.n_qubits:
            raise ConfigurationError(
                f"{kind.value} requiere {kind.n_qubits} qubit(s), recibió {self.qubits}"
            )
        if any(q < 0 for q in self.qubits):
            raise ConfigurationError(f"Índice de qubit negativo en {self.qubits}")
        if kind is GateKind.CX and self.qubits[0] == self.qubits[1]:
            raise ConfigurationError(f"CX requiere control y target distintos: {self.qubits}")

        if kind.is_rotation:
            angle = 0.0 if self.angle is None else float(self.angle)
            if not math.isfinite(angle):
                raise ConfigurationError(f"Ángulo no finito para {kind.value}: {angle}")
            object.__setattr__(self, "angle", angle)
        elif self.angle is not None:
            raise ConfigurationError(f"{kind.value} no admite ángulo")

    def with_angle(self, angle: float) -> "Gate":
        """Devuelve una copia con otro ángulo (solo rotaciones)."""
        return Gate(self.kind, self.qubits, angle)

    def to_dict(self) -> Dict:
        """Convierte a diccionario."""
        return {"kind": self.kind.value, "qubits": list(self.qubits), "angle": self.angle}

    @classmethod
    def from_dict(cls, data: Dict) -> "Gate":
        """Reconstruye la compuerta desde su diccionario."""
        return cls(GateKind(data["kind"]), tuple(data["qubits"]), data.get("angle"))

    def __str__(self) -> str:
        qubits = ",".join(str(q) for q in self.qubits)
        if self.kind.is_rotation:
            return f"{self.kind.value}({self.angle:.4f})[{qubits}]"
        return f"{self.kind.value}[{qubits}]"


def rotation_matrix(kind: GateKind, angle: float) -> np.ndarray:
    """
    Matriz 2x2 de una rotación de Pauli.

    Args:
        kind: RX, RY o RZ
        angle: Ángulo en radianes

    Returns:
        Matriz unitaria 2x2
    """
    c = math.cos(angle / 2.0)
    s = math.sin(angle / 2.0)
    if kind is GateKind.RX:
        return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)
    if kind is GateKind.RY:
        return np.array([[c, -s], [s, c]], dtype=complex)
    if kind is GateKind.RZ:
        return np.array([[c - 1j * s, 0], [0, c + 1j * s]], dtype=complex)
    raise ConfigurationError(f"{kind} no es una rotación")


def gate_matrix(gate: Gate) -> np.ndarray:
    """
    Matriz unitaria de una compuerta (2x2 o 4x4).

    Args:
        gate: Compuerta

    Returns:
        Matriz unitaria compleja
    """
    if gate.kind.is_rotation:
        return rotation_matrix(gate.kind, gate.angle)
    return _FIXED_MATRICES[gate.kind]

"""
Codificación tensorial del circuito como estado del agente.

Tensor [D_max, N+3, N]:
    filas 0..N-1   CX: [m][c][t] = 1 para un CX con control c y target t en el momento m
    filas N..N+2   rotaciones: [m][N+r][q] = 1 para RX/RY/RZ (r = 0, 1, 2) sobre q
                   sin parámetros: código binario de 3 bits (índice del tipo + 1)
"""
from dataclasses import dataclass

import numpy as np

from ..qsim.circuit import CircuitProgram
from ..qsim.gates import FIXED_KINDS, ROTATION_KINDS, Gate, GateKind
from ..utils.errors import ContractViolation, DataError


@dataclass
class QasObservation:
    """Estado del agente: estructura del circuito y costo normalizado."""

    structure: np.ndarray
    cost_feature: float

    @property
    def size(self) -> int:
        return int(self.structure.size) + 1

    def flat(self) -> np.ndarray:
        """Vector de entrada de la red (estructura aplanada + costo)."""
        return np.concatenate(
            [self.structure.reshape(-1), np.array([self.cost_feature], dtype=np.float32)]
        ).astype(np.float32)


def observation_size(n_qubits: int, d_max: int) -> int:
    """Dimensión del vector de entrada de la red."""
    return d_max * (n_qubits + 3) * n_qubits + 1


def encode_observation(
    program: CircuitProgram, d_max: int, cost_feature: float, parameterized: bool = True
) -> QasObservation:
    """
    Codifica el circuito.

    Args:
        program: Circuito actual
        d_max: Profundidad máxima (primer eje del tensor)
        cost_feature: Costo normalizado en [0, 1]
        parameterized: Conjunto de compuertas con rotaciones o sin parámetros

    Returns:
        QasObservation
    """
    n = program.n_qubits
    structure = np.zeros((d_max, n + 3, n), dtype=np.float32)
    for gate, moment in zip(program.gates, program.moments):
        if moment >= d_max:
            raise ContractViolation(f"Momento {moment} excede D_max={d_max}")
        if gate.kind is GateKind.CX:
            control, target = gate.qubits
            structure[moment, control, target] = 1.0
        elif parameterized:
            structure[moment, n + ROTATION_KINDS.index(gate.kind), gate.qubits[0]] = 1.0
        else:
            code = FIXED_KINDS.index(gate.kind) + 1
            for bit in range(3):
                if (code >> bit) & 1:
                    structure[moment, n + bit, gate.qubits[0]] = 1.0
    return QasObservation(structure, float(np.clip(cost_feature, 0.0, 1.0)))


def decode_observation(observation: QasObservation, parameterized: bool = True) -> CircuitProgram:
    """
    Reconstruye tipos, posiciones y momentos de las compuertas (sin ángulos).

    Args:
        observation: Observación codificada
        parameterized: Conjunto de compuertas usado al codificar

    Returns:
        CircuitProgram con rotaciones en ángulo 0
    """
    structure = observation.structure
    d_max, rows, n = structure.shape
    if rows != n + 3:
        raise DataError(f"Forma de estructura inválida: {structure.shape}")
    gates = []
    for m in range(d_max):
        layer = structure[m]
        for control in range(n):
            for target in range(n):
                if layer[control, target] > 0.5:
                    gates.append(Gate(GateKind.CX, (control, target)))
        for q in range(n):
            bits = [int(layer[n + r, q] > 0.5) for r in range(3)]
            if not any(bits):
                continue
            if parameterized:
                gates.append(Gate(ROTATION_KINDS[bits.index(1)], (q,), 0.0))
            else:
                code = bits[0] + 2 * bits[1] + 4 * bits[2]
                gates.append(Gate(FIXED_KINDS[code - 1], (q,)))
    return CircuitProgram(n, gates)


def cost_feature(cost: float, e_min: float, initial_cost: float) -> float:
    """clip((C_t - E_min) / |C_0 - E_min|, 0, 1); 0 si el denominador es nulo."""
    scale = abs(initial_cost - e_min)
    if scale == 0.0:
        return 0.0
    return float(np.clip((cost - e_min) / scale, 0.0, 1.0))

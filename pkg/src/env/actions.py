"""
Espacio de acciones discreto y máscara de acciones ilegales.

Orden de índices:
    [kind_0(q0), kind_1(q0), ..., kind_0(q1), ...]  -> len(kinds) * N acciones de un qubit
    [CX(0,1), CX(0,2), ..., CX(1,0), ...]            -> N(N-1) pares ordenados (c, t)
"""
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from ..qsim.circuit import CircuitProgram
from ..qsim.gates import FIXED_KINDS, ROTATION_KINDS, Gate, GateKind
from ..utils.errors import ConfigurationError


@dataclass(frozen=True)
class GateAction:
    """Acción decodificada."""

    index: int
    kind: GateKind
    qubits: Tuple[int, ...]

    def to_gate(self) -> Gate:
        """Compuerta correspondiente (rotaciones con ángulo 0)."""
        return Gate(self.kind, self.qubits, 0.0 if self.kind.is_rotation else None)

    def __str__(self) -> str:
        return f"{self.kind.value}{list(self.qubits)}"


class ActionSpace:
    """Acciones de colocación de compuertas para un registro de N qubits."""

    def __init__(self, n_qubits: int, parameterized: bool = True):
        """
        Inicializa el espacio de acciones.

        Args:
            n_qubits: Número de qubits
            parameterized: True para RX/RY/RZ + CX, False para X/Y/Z/H/T + CX
        """
        if n_qubits < 2:
            raise ConfigurationError(f"El espacio de acciones requiere ≥ 2 qubits: {n_qubits}")
        self.n_qubits = n_qubits
        self.parameterized = parameterized
        self.single_kinds: Tuple[GateKind, ...] = ROTATION_KINDS if parameterized else FIXED_KINDS
        self.cx_pairs: List[Tuple[int, int]] = [
            (c, t) for c in range(n_qubits) for t in range(n_qubits) if c != t
        ]
        self.n_single = len(self.single_kinds) * n_qubits
        self.size = self.n_single + len(self.cx_pairs)
        self._actions = [self._build(i) for i in range(self.size)]
        self._index = {(a.kind, a.qubits): a.index for a in self._actions}

    def __len__(self) -> int:
        return self.size

    def _build(self, index: int) -> GateAction:
        if index < self.n_single:
            q, r = divmod(index, len(self.single_kinds))
            return GateAction(index, self.single_kinds[r], (q,))
        return GateAction(index, GateKind.CX, self.cx_pairs[index - self.n_single])

    def decode(self, index: int) -> GateAction:
        """Índice -> acción."""
        if not 0 <= int(index) < self.size:
            raise ConfigurationError(f"Acción {index} fuera de rango [0, {self.size})")
        return self._actions[int(index)]

    def encode(self, kind: GateKind, qubits: Tuple[int, ...]) -> int:
        """(tipo, qubits) -> índice."""
        key = (GateKind(kind), tuple(qubits))
        if key not in self._index:
            raise ConfigurationError(f"Acción inexistente en este espacio: {key}")
        return self._index[key]

    def legal_mask(self, program: CircuitProgram) -> np.ndarray:
        """
        Máscara de acciones legales para el circuito actual.

        Una acción es ilegal si repite el tipo de la última compuerta sobre el
        mismo qubit (redundancia) o si repite un CX con el mismo (control,
        target) que es la última compuerta de ambos qubits.

        Args:
            program: Circuito construido hasta ahora

        Returns:
            Vector booleano de longitud size
        """
        mask = np.ones(self.size, dtype=bool)
        n_kinds = len(self.single_kinds)
        for q in range(self.n_qubits):
            last = program.last_on(q)
            if last is None:
                continue
            gate, _ = last
            if gate.kind in self.single_kinds:
                mask[q * n_kinds + self.single_kinds.index(gate.kind)] = False
            elif gate.kind is GateKind.CX and gate.qubits[0] == q:
                if program.last_on(gate.qubits[1]) == last:
                    mask[self.n_single + self.cx_pairs.index(gate.qubits)] = False
        return mask
